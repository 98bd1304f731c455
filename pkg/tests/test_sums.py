import math
from collections import defaultdict

import mpmath
import numpy as np
import pytest

from mixedsums.arith import PrimeModulus
from mixedsums.characters import Character
from mixedsums.diophantine import Theta
from mixedsums.sums import (
    distribution_probe,
    family_sums,
    geometric_sum,
    mixed_sum,
    moment_report,
)


def test_mixed_sum_empty_range(pm101, theta_sqrt2, bump):
    assert mixed_sum(pm101, 1, 0.5, theta_sqrt2, bump) == 0j


def test_mixed_sum_quadratic_character_cancels(pm5, flat):
    chi = Character(pm5, 2)
    val = mixed_sum(pm5, chi, 4, Theta.rational(0, 1), flat)
    assert abs(val) < 1e-14  # 1 - 1 - 1 + 1


def test_mixed_sum_against_mpmath(pm5, theta_sqrt2, flat):
    mpmath.mp.dps = 30
    th = mpmath.sqrt(2) - 1
    ref = sum(mpmath.e ** (2j * mpmath.pi * n * th) for n in range(1, 11) if n % 5)
    got = mixed_sum(pm5, 0, 10, theta_sqrt2, flat)
    assert abs(got - complex(ref)) < 1e-13


def test_family_matches_direct_on_grid(theta_sqrt2, bump):
    for r in (7, 101, 1009):
        pm = PrimeModulus(r)
        for x in (r // 4, r // 2, r):
            if x < 1:
                continue
            dft = family_sums(pm, x, theta_sqrt2, bump)
            direct = family_sums(pm, x, theta_sqrt2, bump, method="direct")
            err = np.max(np.abs(dft.values - direct.values))
            assert err <= 1e-8 * math.sqrt(x)
            assert dft.method == "dft" and direct.method == "direct"


def test_family_entry_zero_is_principal_sum(pm101, theta_sqrt2, bump):
    fs = family_sums(pm101, 60, theta_sqrt2, bump)
    assert abs(fs.entry(0) - mixed_sum(pm101, 0, 60, theta_sqrt2, bump)) < 1e-12


def test_family_zero_x(pm101, theta_sqrt2, bump):
    fs = family_sums(pm101, 0, theta_sqrt2, bump)
    assert np.all(fs.values == 0)


def test_family_warns_beyond_period(pm7, theta_sqrt2, bump):
    with pytest.warns(UserWarning):
        family_sums(pm7, 15, theta_sqrt2, bump)


def test_second_moment_identity(pm101, theta_sqrt2, bump):
    mr = moment_report(family_sums(pm101, 60, theta_sqrt2, bump))
    n = np.arange(1, 61)
    ref = math.fsum((bump(n / 60) ** 2).tolist())
    assert mr.second_moment_ref == pytest.approx(ref, rel=1e-15)
    assert mr.second_moment_rel_error < 1e-10


def test_second_moment_identity_at_full_period(pm101, theta_sqrt2, bump):
    # x = r: the n = r term is dropped on both sides (it is not a unit)
    mr = moment_report(family_sums(pm101, 101, theta_sqrt2, bump))
    assert mr.second_moment_rel_error < 1e-10


def test_second_moment_identity_flat_weight(pm101, theta_sqrt2, flat):
    for x in (10, 60, 101):
        mr = moment_report(family_sums(pm101, x, theta_sqrt2, flat))
        assert mr.second_moment_ref == min(x, 100)
        assert mr.second_moment_rel_error < 1e-10


def test_zeroth_moment_is_trivially_one(pm101, theta_sqrt2, bump):
    fs = family_sums(pm101, 60, theta_sqrt2, bump)
    assert np.mean(np.abs(fs.values) ** 0) == 1.0


def test_fourth_moment_equals_congruence_sum(theta_sqrt2, flat):
    """Flat weight, x <= sqrt(r): E|S|^4 equals the sum of e((m1+m2-n1-n2)theta)
    over m1 m2 = n1 n2 (mod r), evaluated here by product-class bucketing."""
    pm = PrimeModulus(101)
    x = 10
    fs = family_sums(pm, x, theta_sqrt2, flat)
    a = np.abs(fs.values)
    m4 = math.fsum((a**4).tolist()) / (pm.r - 1)
    phases = np.exp(2j * np.pi * theta_sqrt2.fractional_parts(2 * x))
    buckets: dict[int, complex] = defaultdict(complex)
    for m1 in range(1, x + 1):
        for m2 in range(1, x + 1):
            buckets[(m1 * m2) % pm.r] += phases[m1 + m2 - 1]
    congruence_sum = math.fsum(abs(z) ** 2 for z in buckets.values())
    assert abs(m4 - congruence_sum) < 1e-6


def test_moment_inequalities(theta_sqrt2, theta_golden, bump):
    for r, x in ((101, 60), (1009, 500), (1009, 1009)):
        pm = PrimeModulus(r)
        for th in (theta_sqrt2, theta_golden):
            mr = moment_report(family_sums(pm, x, th, bump))
            assert mr.abs_moment_1**2 <= mr.moment_2 * (1 + 1e-12)
            assert mr.moment_2 <= mr.abs_moment_1 ** (2 / 3) * mr.moment_4 ** (1 / 3) * (1 + 1e-12)


def test_geometric_sum_examples():
    g = geometric_sum(2, 0.5)
    assert abs(g.direct) < 1e-12  # e(1/2) + e(1) = -1 + 1
    g2 = geometric_sum(7, 3.0)
    assert g2.direct == pytest.approx(7.0)
    assert g2.closed_form is None
    g3 = geometric_sum(100, math.sqrt(2) - 1)
    assert abs(g3.direct - g3.closed_form) < 1e-10
    assert g3.bound_ratio <= 1.0 + 1e-9


def test_geometric_sum_zero_length():
    assert geometric_sum(0, 0.3).direct == 0j


def test_geometric_sum_bound_ratio_across_angles():
    for alpha in (0.1, 0.25, 0.37, math.sqrt(2) - 1, 0.499):
        for y in (1, 10, 100, 1000):
            g = geometric_sum(y, alpha)
            assert g.bound_ratio <= 1.0 + 1e-9


def test_distribution_probe_reference_constants(pm101, theta_sqrt2, bump):
    rep = distribution_probe(pm101, 60, theta_sqrt2, bump)
    assert rep.reference_abs_mean == pytest.approx(math.sqrt(math.pi) / 2)
    assert rep.reference_abs_4 == 2.0
    assert rep.abs_sq_mean == pytest.approx(1.0, abs=1e-12)  # self-normalised


def test_distribution_probe_desk_run(theta_sqrt2, bump):
    rep = distribution_probe(PrimeModulus(10007), 5000, theta_sqrt2, bump)
    # recorded, not asserted against the gaussian limit: the family value
    # lands near sqrt(pi)/2 ~ 0.8862 but no convergence is claimed
    assert 0.5 < rep.abs_mean < 1.2
    assert 0.0 <= rep.ks_exponential <= 1.0
    assert abs(rep.mean) < 0.1


def test_distribution_probe_requires_family(pm7, theta_sqrt2, bump):
    with pytest.raises(ValueError):
        distribution_probe(pm7, 4, theta_sqrt2, bump)
