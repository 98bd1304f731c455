"""The acceptance battery: every identity the library promises, run at
fixed parameter grids with pinned tolerances and runtime budgets.

Exact identities (orthogonality moments, inclusion-exclusion, injectivity,
integer counts) are asserted at float-roundoff tolerances.  Asymptotic
statements appear as bounded count/bound ratios with the observed constants
frozen here, so a regression that changes any ratio trips the battery.

One check is expected to fail and is marked accordingly: the rational-angle
contrast at the x = r endpoint (see ``rational_contrast``).  The measured
ratio rises there instead of falling: at full period the sum collapses to a
handful of fixed-modulus phasors whose phases rotate with the character, and
the first-moment ratio of such a sum sits near 0.95 for every r, above the
family-gaussian reference 0.886.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import PrimeModulus
from .characters import Character
from .counting import (
    count_ab_brute_all,
    count_ab_congruence_all,
    dyadic_tail_sum,
    pigeonhole_count,
    surface_sweep,
)
from .diophantine import Theta, reduce_mod_r
from .poisson import DualSetup, poisson_residual
from .shortsum import offdiag_count_profile, offdiag_count_profile_brute, offdiag_sum, offdiag_sum_brute, scale_decomposition
from .sums import family_sums, moment_report
from .weights import WeightFunction

# Observed constants, frozen from the reference run; tests assert the
# quantities stay below them.
SWEEP_RATIO_CAP = 8.5          # max observed 7.93 over the (T, r) grid
PIGEONHOLE_RATIO_CAP = 2.5     # max observed 1.98 over the r grid
SWEEP_TREND_FACTOR = 1.25      # allowed growth of the ratio per T step


@dataclass
class CriterionResult:
    cid: str
    name: str
    passed: bool
    runtime: float
    budget: float
    details: dict = field(default_factory=dict)
    expected_failure: bool = False

    @property
    def within_budget(self) -> bool:
        return self.runtime <= self.budget

    @property
    def ok(self) -> bool:
        return self.passed and self.within_budget

    def line(self) -> str:
        status = "PASS" if self.ok else ("FAIL (expected)" if self.expected_failure else "FAIL")
        return f"[{status}] {self.cid} {self.name} ({self.runtime:.2f}s / budget {self.budget:.0f}s)"


def _timed(cid, name, budget, fn, expected_failure=False) -> CriterionResult:
    t0 = time.perf_counter()
    passed, details = fn()
    return CriterionResult(cid, name, passed, time.perf_counter() - t0, budget, details, expected_failure)


def second_moment_exactness() -> CriterionResult:
    """E|S|^2 equals sum_{n <= min(x, r-1)} w(n/x)^2 to 1e-10 relative on
    (r, x) in {(101, 60), (1009, 500), (10007, 9000)}."""

    def run():
        theta = Theta.sqrt(2)
        w = WeightFunction.bump()
        errs = {}
        for r, x in ((101, 60), (1009, 500), (10007, 9000)):
            mr = moment_report(family_sums(PrimeModulus(r), x, theta, w))
            errs[f"r={r},x={x}"] = mr.second_moment_rel_error
        return max(errs.values()) < 1e-10, errs

    return _timed("A1", "second-moment identity", 5.0, run)


def poisson_identity() -> CriterionResult:
    """Dual-sum residual <= 1e-6 sqrt(x) for every character mod 101 at
    x = 60 and for 20 characters mod 1009 at x = 500, with the truncation
    m_max = ceil(100 (2 + r/x))."""

    def run():
        theta = Theta.sqrt(2)
        w = WeightFunction.bump()
        worst = {}
        for r, x, js in (
            (101, 60, range(100)),
            (1009, 500, sorted({round(i * 1008 / 20) for i in range(20)})),
        ):
            pm = PrimeModulus(r)
            setup = DualSetup(pm, x, theta)
            m_max = math.ceil(100 * (2 + r / x))
            res = max(poisson_residual(Character(pm, j), setup, w, m_max).residual for j in js)
            worst[f"r={r},x={x}"] = (res, 1e-6 * math.sqrt(x))
        return all(res < tol for res, tol in worst.values()), worst

    return _timed("A2", "poisson dual identity", 30.0, run)


def fourth_moment_bridge() -> CriterionResult:
    """For x = 90 <= sqrt(r) at r = 10007 with the flat weight, the family
    fourth moment E|S|^4 equals (diagonal count) + (off-diagonal sum),
    within 1e-6 absolute: perfect orthogonality turns the moment into the
    product-equation sum, whose diagonal contributes exactly 2x^2 - x."""

    def run():
        theta = Theta.sqrt(2)
        pm = PrimeModulus(10007)
        x = 90
        fs = family_sums(pm, x, theta, WeightFunction.flat())
        a = np.abs(fs.values)
        m4 = math.fsum((a**4).tolist()) / (pm.r - 1)
        diag = 2 * x * x - x
        off = offdiag_sum(x, theta).real
        err = abs(m4 - diag - off)
        return err < 1e-6, {"m4": m4, "diagonal": diag, "offdiag": off, "abs_err": err}

    return _timed("A3", "fourth-moment / product-sum bridge", 10.0, run)


def quadruple_folding_injectivity() -> CriterionResult:
    """Over all quadruples with entries in [-12, 12]: the folded point
    (a, b, c) satisfies ab + 2cS = S^2 - 4P exactly, and no two quadruples
    share both invariants (S, P) and image."""

    def run():
        side = np.arange(-12, 13, dtype=np.int64)
        m1, m2, n1, n2 = (g.ravel() for g in np.meshgrid(side, side, side, side, indexing="ij"))
        S = m1 + m2 - n1 - n2
        P = n1 * n2 - m1 * m2
        a = n1 - n2 + m1 - m2
        b = n1 - n2 - m1 + m2
        c = m1 + m2
        on_surface = np.all(a * b + 2 * c * S == S * S - 4 * P)
        key = (((S + 48) * 600 + (P + 300)) * 100 + (a + 50)) * 10000 + (b + 50) * 100 + (c + 50)
        injective = len(np.unique(key)) == len(key)
        return bool(on_surface and injective), {
            "quadruples": len(key), "surface_ok": bool(on_surface), "injective": bool(injective),
        }

    return _timed("A4", "quadruple folding: surface + injectivity", 5.0, run)


def product_congruence_counts() -> CriterionResult:
    """For every q <= 300 and every d: the divisor-formula count N(d, q)
    matches the brute histogram, obeys N <= tau(gcd(d, q)) q, and is
    multiplicative over coprime factorisations q = q1 q2 <= 300."""

    def run():
        from .arith import divisor_count

        tables = {}
        for q in range(1, 301):
            fast = count_ab_congruence_all(q)
            brute = count_ab_brute_all(q)
            if not np.array_equal(fast, brute):
                return False, {"q": q, "mismatch": True}
            d = np.arange(q)
            gcds = np.gcd(d, q)
            caps = np.array([divisor_count(int(g)) for g in gcds]) * q
            if np.any(fast > caps):
                return False, {"q": q, "bound_violation": True}
            tables[q] = fast
        checked = 0
        for q1 in range(2, 151):
            for q2 in range(2, 300 // q1 + 1):
                if math.gcd(q1, q2) != 1:
                    continue
                q = q1 * q2
                d = np.arange(q)
                if not np.array_equal(tables[q], tables[q1][d % q1] * tables[q2][d % q2]):
                    return False, {"q1": q1, "q2": q2, "crt_violation": True}
                checked += 1
        return True, {"moduli": 300, "crt_pairs": checked}

    return _timed("A5", "product congruence exact counts", 20.0, run)


def pigeonhole_box() -> CriterionResult:
    """Box counts #{(S, P) in [1, N] x [-M, M] : kS = P mod r} at
    M = r/100, N = M/2 stay below 2.5 * N / log(2 + r/M)^3 across
    r in {1009, 10007, 100003}, and every extracted witness (q, d)
    satisfies ||q theta|| <= 3M/r."""

    def run():
        theta = Theta.sqrt(2)
        details = {}
        ok = True
        witnessed = 0
        for r in (1009, 10007, 100003):
            k, _ = reduce_mod_r(theta, r)
            M, N = r // 100, r // 200
            rep = pigeonhole_count(N, M, k, r, c=1 / 3)
            ok &= rep.count <= PIGEONHOLE_RATIO_CAP * rep.bound
            if rep.count >= 1:
                if rep.witness is None:
                    ok = False
                else:
                    q, d = rep.witness
                    dist = theta.dist_nearest_int(q)
                    ok &= bool(dist.certified_le(Fraction(3 * M, r)))
                    witnessed += 1
            details[f"r={r}"] = {"count": rep.count, "bound": rep.bound, "witness": rep.witness}
        ok &= witnessed >= 1  # the grid must exercise the witness check
        details["witnessed"] = witnessed
        return bool(ok), details

    return _timed("A6", "pigeonhole box count + witness", 5.0, run)


def surface_sweep_stability() -> CriterionResult:
    """The sweep ratio sum N_{S,P}(T) / (T^2 + T^4/r) stays below one
    frozen constant over (T, r) in {50, 100, 200} x {1009, 10007, 100003}
    and never grows by more than 25% per step of T at fixed r."""

    def run():
        theta = Theta.sqrt(2)
        ratios = {}
        ok = True
        for r in (1009, 10007, 100003):
            k, _ = reduce_mod_r(theta, r)
            row = []
            for T in (50, 100, 200):
                rep = surface_sweep(T, r, k)
                row.append(rep.ratio)
            ratios[f"r={r}"] = row
            ok &= all(b <= SWEEP_TREND_FACTOR * a for a, b in zip(row, row[1:]))
        ok &= max(max(v) for v in ratios.values()) <= SWEEP_RATIO_CAP
        return bool(ok), ratios

    return _timed("A7", "surface sweep ratio stability", 120.0, run)


def first_moment_window() -> CriterionResult:
    """E|S| / sqrt(E|S|^2) lies in [0.5, 1.0] at every point of the grid
    r in {1009, 10007, 100003}, x in {r^0.6, 2 sqrt(r), r/2, r}."""

    def run():
        theta = Theta.sqrt(2)
        w = WeightFunction.bump()
        vals = {}
        for r in (1009, 10007, 100003):
            pm = PrimeModulus(r)
            for x in (math.ceil(r**0.6), 2 * math.ceil(math.sqrt(r)), math.ceil(r / 2), r):
                mr = moment_report(family_sums(pm, x, theta, w))
                vals[f"r={r},x={x}"] = mr.abs_moment_1 / math.sqrt(mr.moment_2)
        ok = all(0.5 <= v <= 1.0 for v in vals.values())
        return ok, vals

    return _timed("A8", "first-moment ratio window", 180.0, run)


def rational_contrast() -> CriterionResult:
    """Contrast run at theta = 1/3: the same ratio is asserted to decrease
    from x = ceil(r^0.6) to x = r.  This check is expected to FAIL: the
    rational-angle suppression needs x and r/x to grow together, and at the
    x = r endpoint the sum collapses to a few fixed-modulus phasors with
    character-driven phases, so the measured ratio rises to ~0.95 at every
    r instead.  Kept as stated, with the measurements reported.
    """

    def run():
        theta = Theta.rational(1, 3)
        w = WeightFunction.bump()
        vals = {}
        ok = True
        for r in (1009, 10007, 100003):
            pm = PrimeModulus(r)
            pair = []
            for x in (math.ceil(r**0.6), r):
                mr = moment_report(family_sums(pm, x, theta, w))
                pair.append(mr.abs_moment_1 / math.sqrt(mr.moment_2))
            vals[f"r={r}"] = pair
            ok &= pair[1] < pair[0]
        return bool(ok), vals

    return _timed("A8c", "rational-angle contrast (expected failure)", 180.0, run, expected_failure=True)


def offdiag_decomposition() -> CriterionResult:
    """Scale decomposition S1 + S2 - S3 equals the off-diagonal sum to
    1e-9 relative at x in {16, 64, 256}, and the parametrized evaluation
    agrees with product bucketing (counts exactly, values to 1e-9) for
    every x <= 300."""

    def run():
        theta = Theta.sqrt(2)
        details = {}
        for x in (16, 64, 256):
            d = scale_decomposition(x, theta)
            rel = abs(d.total - d.offdiag) / max(1e-300, abs(d.offdiag))
            details[f"incl_excl_x={x}"] = rel
            if rel > 1e-9:
                return False, details
        if not np.array_equal(offdiag_count_profile(300), offdiag_count_profile_brute(300)):
            return False, {"count_profiles": "mismatch"}
        fr = theta.fractional_parts(300)
        for x in range(2, 301):
            a = offdiag_sum(x, theta, _fr=fr[:x]).real
            b = offdiag_sum_brute(x, theta).real
            if abs(a - b) > 1e-9 * max(1.0, abs(b)):
                return False, {"x": x, "param": a, "brute": b}
        details["value_grid"] = "2..300 ok"
        return True, details

    return _timed("A9", "off-diagonal decomposition + dual paths", 60.0, run)


def dyadic_tail_numerics() -> CriterionResult:
    """D(0) = pi^2/6 within 1e-6 (tail-bounded), and D(s)/max(1, s) <= 4
    for s in {-5, ..., 50}."""

    def run():
        rep0 = dyadic_tail_sum(0, 2_000_000)
        mid = rep0.partial + rep0.tail_bound / 2
        err = abs(mid - math.pi**2 / 6) + rep0.tail_bound / 2
        if err > 1e-6:
            return False, {"D0_err": err}
        worst = max(dyadic_tail_sum(s, 50_000).ratio for s in range(-5, 51))
        return worst <= 4.0, {"D0_err": err, "max_ratio": worst}

    return _timed("A10", "dyadic tail sums", 1.0, run)


ALL_CRITERIA = (
    second_moment_exactness,
    poisson_identity,
    fourth_moment_bridge,
    quadruple_folding_injectivity,
    product_congruence_counts,
    pigeonhole_box,
    surface_sweep_stability,
    first_moment_window,
    rational_contrast,
    offdiag_decomposition,
    dyadic_tail_numerics,
)


def run_acceptance(verbose: bool = True) -> list[CriterionResult]:
    results = []
    for fn in ALL_CRITERIA:
        res = fn()
        results.append(res)
        if verbose:
            print(res.line(), flush=True)
    return results
