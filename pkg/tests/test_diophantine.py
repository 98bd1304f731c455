import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixedsums.diophantine import (
    DiophantineProfile,
    Enclosure,
    PrecisionError,
    Theta,
    check_diophantine_floor,
    reduce_mod_r,
    resonant_set,
)


# -- Theta construction and representation -------------------------------------


def test_parse_forms():
    assert Theta.parse("sqrt:2").kind == "quadratic"
    assert Theta.parse("const:pi").kind == "constant"
    assert Theta.parse("const:e").kind == "constant"
    assert Theta.parse("rat:22/7").kind == "rational"
    with pytest.raises(ValueError):
        Theta.parse("cbrt:2")


def test_values_reduced_mod_one():
    assert float(Theta.sqrt(2)) == pytest.approx(math.sqrt(2) - 1, abs=1e-15)
    assert float(Theta.constant("pi")) == pytest.approx(math.pi - 3, abs=1e-15)
    assert float(Theta.rational(22, 7)) == pytest.approx(1 / 7, abs=1e-16)
    golden = Theta.quadratic(1, 1, 5, 2)
    assert float(golden) == pytest.approx((1 + math.sqrt(5)) / 2 - 1, abs=1e-15)


def test_sqrt_rejects_squares():
    with pytest.raises(ValueError):
        Theta.sqrt(9)


def test_fractional_parts_against_mpmath(theta_sqrt2):
    mpmath.mp.dps = 40
    ref = [float(mpmath.frac(n * (mpmath.sqrt(2) - 1))) for n in range(1, 1001)]
    got = theta_sqrt2.fractional_parts(1000)
    assert np.max(np.abs(got - np.array(ref))) < 1e-14


def test_fractional_parts_rational_exact():
    th = Theta.rational(3, 7)
    got = th.fractional_parts(21)
    ref = [(n * 3 % 7) / 7 for n in range(1, 22)]
    assert np.array_equal(got, np.array(ref))


# -- continued fractions ---------------------------------------------------------


def test_cf_sqrt2(theta_sqrt2):
    cf = theta_sqrt2.continued_fraction(10)
    assert cf.quotients[0] == 0
    assert all(a == 2 for a in cf.quotients[1:])
    assert cf.denominators[:6] == [1, 2, 5, 12, 29, 70]


def test_cf_golden(theta_golden):
    cf = theta_golden.continued_fraction(8)
    assert cf.quotients == [0] + [1] * 7


def test_cf_pi():
    cf = Theta.constant("pi").continued_fraction(5)
    assert cf.quotients == [0, 7, 15, 1, 292]


def test_cf_e():
    # e - 2 = [0; 1, 2, 1, 1, 4, 1, 1, 6, ...]
    cf = Theta.constant("e").continued_fraction(9)
    assert cf.quotients == [0, 1, 2, 1, 1, 4, 1, 1, 6]


def test_cf_rational_terminates():
    cf = Theta.rational(22, 7).continued_fraction(10)
    assert cf.quotients == [0, 7]


def test_cf_precision_exhaustion():
    with pytest.raises(PrecisionError):
        Theta.constant("pi", bits=48).continued_fraction(40)


def test_convergents_satisfy_recurrence(theta_sqrt2):
    cf = theta_sqrt2.continued_fraction(12)
    ps = [p for p, _ in cf.convergents]
    qs = cf.denominators
    for i in range(2, len(qs)):
        a = cf.quotients[i]
        assert ps[i] == a * ps[i - 1] + ps[i - 2]
        assert qs[i] == a * qs[i - 1] + qs[i - 2]


# -- distance to the nearest integer ----------------------------------------------


def test_dist_zero_q(theta_sqrt2):
    enc = theta_sqrt2.dist_nearest_int(0)
    assert enc.lo == enc.hi == 0


def test_dist_sqrt2_q5(theta_sqrt2):
    mpmath.mp.dps = 40
    ref = float(abs(5 * (mpmath.sqrt(2) - 1) - mpmath.nint(5 * (mpmath.sqrt(2) - 1))))
    enc = theta_sqrt2.dist_nearest_int(5)
    assert enc.lo <= Fraction(ref).limit_denominator(10**15) <= enc.hi or abs(enc.mid - ref) < 1e-15
    assert enc.mid == pytest.approx(0.0710678118654752, abs=1e-13)


def test_dist_rational_exact_zero():
    th = Theta.rational(1, 3)
    enc = th.dist_nearest_int(3)
    assert enc.lo == enc.hi == 0


def test_dist_width_bound(theta_sqrt2):
    for q in (1, 17, 12345, 999_983):
        enc = theta_sqrt2.dist_nearest_int(q)
        assert enc.width <= Fraction(q, 2 ** theta_sqrt2.bits)


@given(st.integers(min_value=1, max_value=100_000))
def test_dist_matches_float_oracle(q):
    theta = Theta.sqrt(2)
    enc = theta.dist_nearest_int(q)
    v = q * (math.sqrt(2) - 1)
    ref = abs(v - round(v))
    assert abs(enc.mid - ref) < 1e-9


def test_dist_via_convergents_agrees(theta_sqrt2):
    rng = np.random.default_rng(2024)
    for q in rng.integers(1, 1_000_000, size=1000).tolist():
        a = float(theta_sqrt2.dist_nearest_int(int(q)))
        b = theta_sqrt2.dist_via_convergents(int(q))
        assert abs(a - b) < 1e-9


def test_best_approximation_law(theta_sqrt2):
    """Convergent denominators beat every smaller q, checked densely."""
    fr = theta_sqrt2.fractional_parts(100_000)
    dist = np.minimum(fr, 1.0 - fr)
    qs = [q for q in theta_sqrt2.continued_fraction(24).denominators if q <= 100_000]
    for q_prev, q_i in zip(qs, qs[1:]):
        d_i = dist[q_i - 1]
        assert d_i < np.min(dist[: q_i - 1])
        assert np.argmin(dist[: q_i - 1]) == q_prev - 1


# -- enclosures --------------------------------------------------------------------


def test_enclosure_certified_comparisons():
    enc = Enclosure(Fraction(1, 3), Fraction(2, 5))
    assert enc.certified_le(Fraction(1, 2))
    assert not enc.certified_ge(Fraction(1, 2))
    with pytest.raises(PrecisionError):
        enc.certified_le(Fraction(38, 100))
    with pytest.raises(ValueError):
        Enclosure(Fraction(1), Fraction(0))


# -- the approximation floor --------------------------------------------------------


def test_floor_check_passes_at_low_constant(theta_sqrt2):
    res = check_diophantine_floor(theta_sqrt2, 0.07, 10_000)
    assert res.passed
    assert not res.indeterminate


def test_floor_check_fails_at_quarter(theta_sqrt2):
    # ||12 theta|| = 0.02944 < 0.25 exp(-12^(1/4)) = 0.03889 is the first
    # certified failure; the global worst constant sits at the convergent
    # denominator q = 169, where the ratio bottoms out at 0.076991.
    res = check_diophantine_floor(theta_sqrt2, 0.25, 10_000)
    assert not res.passed
    assert res.failure_q == 12
    assert res.witness_q == 169
    assert res.witness_ratio == pytest.approx(0.0769912, abs=1e-6)


def test_floor_check_rational_fails_at_denominator():
    res = check_diophantine_floor(Theta.rational(22, 7), 0.25, 100)
    assert not res.passed
    assert res.failure_q == 7


def test_floor_check_huge_constant_fails_immediately(theta_sqrt2):
    res = check_diophantine_floor(theta_sqrt2, 1e6, 10)
    assert res.failure_q == 1


# -- the resonant set ----------------------------------------------------------------


def test_resonant_zero_always_member(theta_sqrt2, theta_golden):
    for th in (theta_sqrt2, theta_golden):
        rs = resonant_set(th, 100.0)
        assert 0 in rs.members
        assert rs.witnesses[0] == 1


def test_resonant_rational_small_denominator_catches_all():
    # k_max = floor((log 100)^1.1) = 5 >= denominator, so k = 5 certifies
    # every multiplier exactly.
    rs = resonant_set(Theta.rational(1, 5), 100.0)
    assert rs.members == list(range(-10, 11))
    assert all(rs.witnesses[ell] <= 5 for ell in rs.members)


def test_resonant_membership_against_float_scan(theta_sqrt2):
    # every |ell| <= sqrt(x) at x = 1e4, against a double loop over (k, ell)
    rs = resonant_set(theta_sqrt2, 10_000.0)
    thr = 10_000.0 ** (-1 / 3)
    theta = math.sqrt(2) - 1
    for ell in range(0, 101):
        hits = [
            k
            for k in range(1, rs.k_max + 1)
            if abs(k * ell * theta - round(k * ell * theta)) <= thr
        ]
        assert (ell in rs) == bool(hits)
        assert (-ell in rs) == bool(hits)
        if hits:
            assert rs.witnesses[ell] == hits[0]


def test_resonant_spacing_constants(theta_sqrt2):
    """Desk-scale members are dense (the asymptotic spacing has not set in),
    so the recorded spacing constants are small but stable."""
    expected = {1000: 59, 10_000: 133, 100_000: 241}
    for x, n_members in expected.items():
        rs = resonant_set(theta_sqrt2, float(x))
        assert len(rs.members) == n_members
        assert rs.min_gap == 1
        assert rs.min_gap / math.log(x) ** 1.5 > 0.02
        assert not rs.indeterminate


def test_resonant_validates_input(theta_sqrt2):
    with pytest.raises(ValueError):
        resonant_set(theta_sqrt2, 4.0)
    with pytest.raises(ValueError):
        resonant_set(theta_sqrt2, 100.0, eps=0.0)


# -- reduction mod r -------------------------------------------------------------------


def test_reduce_examples(theta_sqrt2):
    k, tp = reduce_mod_r(theta_sqrt2, 101)
    assert k == 41
    assert 0 <= tp.lo and tp.hi < Fraction(1, 101)
    k2, _ = reduce_mod_r(theta_sqrt2, 2)
    assert k2 == 0
    k3, _ = reduce_mod_r(theta_sqrt2, 10007)
    assert k3 == 4145


def test_reduce_theta_prime_window(theta_sqrt2, theta_golden):
    for th in (theta_sqrt2, theta_golden, Theta.constant("e")):
        for r in (2, 101, 1009, 99991):
            k, tp = reduce_mod_r(th, r)
            assert 0 <= tp.lo and tp.hi < Fraction(1, r)
            assert k == math.floor(r * float(th)) or abs(r * float(th) - round(r * float(th))) < 1e-9


def test_reduce_rational_exact():
    k, tp = reduce_mod_r(Theta.rational(41, 101), 101)
    assert k == 41
    assert tp.lo == tp.hi == 0


def test_reduce_precision_exhaustion():
    with pytest.raises(PrecisionError):
        reduce_mod_r(Theta.constant("pi", bits=8), 1_000_003)


# -- profiles ------------------------------------------------------------------------------


def test_profile_evaluation():
    exp_profile = DiophantineProfile("exp", C=1.0, c=0.25)
    pow_profile = DiophantineProfile("power", C=2.0)
    qs = [1, 2, 10, 100]
    for prof in (exp_profile, pow_profile):
        vals = [prof(q) for q in qs]
        assert all(v > 0 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        DiophantineProfile("linear")
    with pytest.raises(ValueError):
        DiophantineProfile("exp", C=-1.0)
