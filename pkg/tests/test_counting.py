import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixedsums.arith import divisor_count
from mixedsums.counting import (
    count_ab_brute_all,
    count_ab_congruence,
    count_ab_congruence_all,
    count_quadruple_brute,
    count_quadruple_congruence,
    count_surface_box,
    count_surface_box_brute,
    dyadic_tail_sum,
    hyperbola_class_brute,
    hyperbola_class_count,
    pigeonhole_count,
    quadruple_to_surface,
    surface_sweep,
)
from mixedsums.diophantine import Theta, reduce_mod_r


def literal_box_count(S, P, L):
    """Three nested loops; the independent oracle for tiny boxes."""
    D = S * S - 4 * P
    return sum(
        1
        for a in range(-L, L + 1)
        for b in range(-L, L + 1)
        for c in range(-L, L + 1)
        if a * b + 2 * c * S == D
    )


# -- N(d, q) -----------------------------------------------------------------


def test_ab_congruence_examples():
    assert count_ab_congruence(1, 5).count == 4  # = phi(5); gcd(d, q) = 1
    assert count_ab_congruence(0, 4).count == 8
    assert count_ab_congruence(2, 4).count == 4


def test_ab_congruence_brute_small():
    for q in range(1, 61):
        assert np.array_equal(count_ab_congruence_all(q), count_ab_brute_all(q))


def test_ab_congruence_bound():
    for q in (2, 7, 12, 36, 97, 120):
        counts = count_ab_congruence_all(q)
        for d in range(q):
            assert counts[d] <= divisor_count(math.gcd(d, q)) * q


def test_ab_congruence_crt_small():
    for q1 in range(2, 51):
        for q2 in range(2, 51):
            if math.gcd(q1, q2) != 1 or q1 * q2 > 300:
                continue
            q = q1 * q2
            t, t1, t2 = count_ab_congruence_all(q), count_ab_congruence_all(q1), count_ab_congruence_all(q2)
            d = np.arange(q)
            assert np.array_equal(t, t1[d % q1] * t2[d % q2])


def test_ab_congruence_rejects_bad_modulus():
    with pytest.raises(ValueError):
        count_ab_congruence(1, 0)


# -- the folding map ------------------------------------------------------------


def test_fold_symmetric_input():
    pt = quadruple_to_surface(1, 1, 1, 1)
    assert (pt.a, pt.b, pt.c) == (0, 0, 2)
    assert (pt.S, pt.P) == (0, 0)
    assert pt.on_surface


def test_fold_example():
    pt = quadruple_to_surface(2, 3, 1, 6)
    assert (pt.a, pt.b, pt.c) == (-6, -4, 5)
    assert (pt.S, pt.P) == (-2, 0)
    assert pt.a * pt.b + 2 * pt.c * pt.S == 4 == pt.S**2 - 4 * pt.P


@given(st.tuples(*[st.integers(min_value=-50, max_value=50)] * 4))
def test_fold_polynomial_identity(quad):
    m1, m2, n1, n2 = quad
    pt = quadruple_to_surface(m1, m2, n1, n2)
    assert (n1 - n2) ** 2 - (m1 - m2) ** 2 + pt.c**2 == (pt.c - pt.S) ** 2 - 4 * pt.P
    assert pt.on_surface


def test_fold_injective_on_fibers_small():
    seen = {}
    for m1 in range(-6, 7):
        for m2 in range(-6, 7):
            for n1 in range(-6, 7):
                for n2 in range(-6, 7):
                    pt = quadruple_to_surface(m1, m2, n1, n2)
                    key = (pt.S, pt.P, pt.a, pt.b, pt.c)
                    assert key not in seen, (key, seen[key], (m1, m2, n1, n2))
                    seen[key] = (m1, m2, n1, n2)


# -- N_{S,P}(T) --------------------------------------------------------------------


def test_surface_box_degenerate_stratum():
    # S = 0, P = 0: pairs with ab = 0 in [-2, 2]^2 are 9, times 5 choices of c
    rep = count_surface_box(0, 0, 2)
    assert rep.count == 45
    assert rep.count == literal_box_count(0, 0, 2)


def test_surface_box_tiny():
    rep = count_surface_box(1, 0, 1)
    assert rep.count == literal_box_count(1, 0, 1) == 4


def test_surface_box_vs_literal_grid():
    for S in range(-4, 5):
        for P in range(-5, 6):
            for L in (1, 2, 3):
                assert count_surface_box(S, P, L).count == literal_box_count(S, P, L)


def test_surface_box_vs_brute_wide():
    rng = np.random.default_rng(11)
    for _ in range(60):
        S = int(rng.integers(-30, 31))
        P = int(rng.integers(-200, 201))
        T = int(rng.integers(1, 41))
        assert count_surface_box(S, P, T).count == count_surface_box_brute(S, P, T)


def test_surface_box_box_constant():
    assert count_surface_box(0, 0, 2, box_constant=2.0).count == literal_box_count(0, 0, 4)


def test_surface_box_bound_column():
    rep = count_surface_box(3, 7, 50)
    t_over_s = 50 / 3
    assert rep.bound == pytest.approx(t_over_s * math.log(2 + t_over_s) * count_ab_congruence(-28, 3).count)
    assert count_surface_box(0, 0, 50).bound == 2500.0
    assert count_surface_box(0, 3, 50).bound == pytest.approx(50 * 3**0.05)


def test_fold_images_are_counted():
    for quad in ((1, 1, 1, 1), (2, 3, 1, 6), (5, 2, 10, 1), (-3, 4, 2, -6)):
        pt = quadruple_to_surface(*quad)
        T = max(1, abs(pt.a), abs(pt.b), abs(pt.c))
        assert count_surface_box(pt.S, pt.P, T).count >= 1


# -- the quadruple count -----------------------------------------------------------


def literal_quadruple_count(members, k, r):
    ms = [m for m in members if (m + k) % r != 0]
    total = 0
    for m1 in ms:
        for m2 in ms:
            lhs = (k + m1) * (k + m2) % r
            for n1 in ms:
                for n2 in ms:
                    if (k + n1) * (k + n2) % r == lhs:
                        total += 1
    return total


def test_quadruple_count_small_interval():
    rep = count_quadruple_congruence((-4, 4), 41, 101)
    assert rep.count == count_quadruple_brute((-4, 4), 41, 101)
    assert rep.count == literal_quadruple_count(range(-4, 5), 41, 101)


def test_quadruple_count_excluded_class():
    # -k mod r inside the window: members drop by one
    rep = count_quadruple_congruence((-4, 4), 3, 7)
    assert rep.params["n_excluded"] >= 1
    assert rep.count == literal_quadruple_count(range(-4, 5), 3, 7)


def test_quadruple_diagonal_lower_bound():
    for k, r, lo, hi in ((41, 101, -4, 4), (4, 11, -3, 3), (0, 13, -5, 5)):
        members = [m for m in range(lo, hi + 1) if (m + k) % r != 0]
        n = len(members)
        rep = count_quadruple_congruence((lo, hi), k, r)
        assert rep.count >= 2 * n * n - n


def test_quadruple_count_accepts_member_lists():
    members = [-7, -2, 0, 1, 5]
    a = count_quadruple_congruence(members, 41, 101).count
    assert a == literal_quadruple_count(members, 41, 101)


def test_quadruple_count_exact_limit():
    with pytest.raises(ValueError):
        count_quadruple_congruence((-2000, 2000), 1, 10007, exact_limit=2000)


# -- pigeonhole ----------------------------------------------------------------------


def pigeonhole_brute(N, M, k, r):
    return sum(1 for S in range(1, N + 1) for P in range(-M, M + 1) if (k * S - P) % r == 0)


def test_pigeonhole_single_s():
    # N = 1: count is the indicator of k mod r landing in [-M, M]
    assert pigeonhole_count(1, 10, 417, 1009).count == (1 if min(417, 1009 - 417) <= 10 else 0)
    assert pigeonhole_count(1, 500, 417, 1009).count == pigeonhole_brute(1, 500, 417, 1009) == 1


def test_pigeonhole_matches_brute(theta_sqrt2):
    k, _ = reduce_mod_r(theta_sqrt2, 10007)
    assert k == 4145
    rep = pigeonhole_count(50, 100, k, 10007)
    assert rep.count == pigeonhole_brute(50, 100, k, 10007) == 0
    assert rep.witness is None
    assert rep.in_regime


def test_pigeonhole_witness_at_large_r(theta_sqrt2):
    k, _ = reduce_mod_r(theta_sqrt2, 100003)
    rep = pigeonhole_count(500, 1000, k, 100003)
    assert rep.count == pigeonhole_brute(500, 1000, k, 100003) == 10
    q, d = rep.witness
    assert (k * q - d) % 100003 == 0
    assert abs(d) <= 2000
    assert theta_sqrt2.dist_nearest_int(q).certified_le(Fraction(3 * 1000, 100003))


def test_pigeonhole_out_of_regime_flag():
    rep = pigeonhole_count(5, 2000, 417, 1009)
    assert not rep.in_regime
    assert rep.count == pigeonhole_brute(5, 2000, 417, 1009)
    # M >= r: every S contributes at least floor((2M+1)/r) solutions
    assert rep.count >= 5 * ((2 * 2000 + 1) // 1009)


# -- the sweep ------------------------------------------------------------------------


def sweep_brute(T, r, k):
    total = 0
    for S in range(-T, T + 1):
        for P in range(-T * T, T * T + 1):
            if (k * S - P) % r == 0:
                total += count_surface_box_brute(S, P, T)
    return total


def test_sweep_tiny_matches_brute():
    rep = surface_sweep(1, 11, 4)
    assert rep.total == sweep_brute(1, 11, 4)


def test_sweep_small_matches_brute():
    rep = surface_sweep(6, 101, 41)
    assert rep.total == sweep_brute(6, 101, 41)


def test_sweep_s0_stratum_accounting():
    rep = surface_sweep(20, 101, 41)
    s0 = sum(count_surface_box_brute(0, t * 101, 20) for t in range(-3, 4))
    assert rep.s0_total == s0
    assert rep.s0_bound == pytest.approx(400 + (400 / 101) * 20 ** 1.1)


def test_sweep_threaded_deterministic():
    a = surface_sweep(40, 1009, 417, threads=1)
    b = surface_sweep(40, 1009, 417, threads=4)
    assert a.total == b.total and a.s0_total == b.s0_total


# -- hyperbola classes -------------------------------------------------------------------


def test_hyperbola_matches_brute_grid():
    for S in (2, 3, 5, 10):
        for u in range(1, S + 1):
            for v in range(1, S + 1):
                for P in (-20, 0, 7):
                    a = hyperbola_class_count(u, v, S, 10, P)
                    b = hyperbola_class_brute(u, v, S, 10, P)
                    assert a == b, (u, v, S, P)


def test_hyperbola_saturated_class_is_tiny():
    # S = T: at most a 3 x 3 grid of residues fits in the box
    for u in range(1, 11):
        for v in range(1, 11):
            assert hyperbola_class_count(u, v, 10, 10, 0) <= 9


def test_hyperbola_zero_residue_stratum():
    c = hyperbola_class_count(10, 10, 10, 100, 0)
    assert c == hyperbola_class_brute(10, 10, 10, 100, 0)
    assert c >= 100 // 10  # the a = 0 column alone


def test_hyperbola_empty_for_huge_shift():
    T, S = 20, 4
    P = (2 * T * S + T * T) // 4 + 1
    assert hyperbola_class_count(1, 1, S, T, P) == 0


def test_hyperbola_validates_class():
    with pytest.raises(ValueError):
        hyperbola_class_count(0, 1, 3, 10, 0)
    with pytest.raises(ValueError):
        hyperbola_class_count(1, 1, 11, 10, 0)


# -- dyadic tails ----------------------------------------------------------------------------


def test_dyadic_tail_zeta2():
    rep = dyadic_tail_sum(0, 2_000_000)
    assert rep.partial <= math.pi**2 / 6 <= rep.partial + rep.tail_bound
    assert abs(rep.partial + rep.tail_bound / 2 - math.pi**2 / 6) < 1e-6


def test_dyadic_tail_small_s_bound():
    # for s <= 1 the sum is at most sum_j j / max(1, j-1)^3 ~ 3.847
    cap = dyadic_tail_sum(1, 100_000).upper
    for s in (-5, -1, 0, 1):
        assert dyadic_tail_sum(s, 100_000).upper <= cap + 1e-9
    assert cap == pytest.approx(3.8470, abs=2e-4)


def test_dyadic_tail_s10():
    rep = dyadic_tail_sum(10, 10_000)
    assert 23.6 < rep.upper < 23.7  # = 2s + 1 + s(zeta(3)-1) + (zeta(2)-1) + tail


def test_dyadic_tail_ratio_window():
    ratios = [dyadic_tail_sum(s, 50_000).ratio for s in range(-5, 51)]
    assert max(ratios) <= 4.0
    assert max(ratios) == pytest.approx(3.8470, abs=2e-4)  # attained at s = 1


def test_dyadic_tail_validates_range():
    with pytest.raises(ValueError):
        dyadic_tail_sum(10, 15)


# -- the counting bridge ------------------------------------------------------------------------


def test_quadruple_count_below_surface_sweep():
    """The folded image of every congruent quadruple lands on an admissible
    (S, P) class, so the block count is dominated by the sweep total over
    the covering box."""
    for r, x in ((11, 8), (101, 60)):
        theta = Theta.sqrt(2)
        k, _ = reduce_mod_r(theta, r)
        t0 = int(2 + r / x)
        members = np.arange(-t0, t0 + 1)
        n4 = count_quadruple_congruence(members, k, r).count
        m_max = int(np.max(np.abs(members)))
        L = 4 * m_max
        total = 0
        for S in range(-L, L + 1):
            rho = (k * S) % r
            for P in range(-2 * m_max * m_max, 2 * m_max * m_max + 1):
                if (rho - P) % r == 0:
                    total += count_surface_box_brute(S, P, 1, box_constant=L)
        assert n4 <= total
