"""Off-diagonal fourth-moment sums over m1*m2 = n1*n2.

Solutions of m1*m2 = n1*n2 factor uniquely as m1 = ga, m2 = hb, n1 = gb,
n2 = ha with (a, b) = 1 and g = gcd(m1, n1); the constraint "all four
<= x" becomes max(a,b) * max(g,h) <= x, and excluding a = b and g = h
removes exactly the diagonal {m1, m2} = {n1, n2}.  The phase of a
quadruple is e((g-h)(a-b) theta).

Summed over the (g, h) box at fixed (a, b) the phases telescope into a
Fejer square, sum_{g,h <= G} e((g-h) alpha) = |sum_{g <= G} e(g alpha)|^2,
so the full off-diagonal sum costs one closed form per coprime pair --
O(x^2)-ish work in total -- while a product-bucketed brute path provides
the independent oracle.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .diophantine import ResonantSet, Theta, resonant_set


@dataclass(frozen=True)
class FactorQuadruple:
    """Coordinates (g, h, a, b) of one solution of m1*m2 = n1*n2."""

    g: int
    h: int
    a: int
    b: int

    @property
    def quadruple(self) -> tuple[int, int, int, int]:
        return (self.g * self.a, self.h * self.b, self.g * self.b, self.h * self.a)

    def in_box(self, x: int) -> bool:
        return max(self.a, self.b) * max(self.g, self.h) <= x

    @property
    def off_diagonal(self) -> bool:
        return self.a != self.b and self.g != self.h


def factor_quadruple(m1: int, m2: int, n1: int, n2: int) -> FactorQuadruple:
    """Invert the parametrization: g = gcd(m1, n1), a = m1/g, b = n1/g,
    h = m2/b.  Requires m1*m2 = n1*n2 with positive entries."""
    if m1 * m2 != n1 * n2:
        raise ValueError("not a product solution")
    g = gcd(m1, n1)
    a, b = m1 // g, n1 // g
    if m2 % b or n2 % a:
        raise ValueError("inconsistent quadruple")
    h = m2 // b
    if h * a != n2:
        raise ValueError("inconsistent quadruple")
    return FactorQuadruple(g, h, a, b)


@lru_cache(maxsize=4)
def _coprime_diffs_table(limit: int) -> tuple[np.ndarray, np.ndarray]:
    vs: list[int] = []
    cum = np.zeros(limit + 1, dtype=np.int64)
    for m in range(2, limit + 1):
        vs.extend(m - t for t in range(1, m) if gcd(t, m) == 1)
        cum[m] = len(vs)
    return np.array(vs, dtype=np.int64), cum


def _coprime_diffs(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Positive differences m - t over coprime pairs t < m <= limit, stored
    flat with cum[m] marking the end of the block for max = m.  Ordered
    pairs contribute each difference once per orientation.  Tables are
    built at power-of-two sizes so scans over many x share one build."""
    if limit < 1:
        limit = 1
    return _coprime_diffs_table(1 << (limit - 1).bit_length() if limit > 1 else 1)


def _fejer_sq(fr_alpha: np.ndarray, fr_G_alpha: np.ndarray, G: int) -> np.ndarray:
    """|sum_{g<=G} e(g alpha)|^2 from the fractional parts of alpha and
    G*alpha; exact zeros of ||alpha|| (rational angles) give G^2."""
    s1 = np.sin(np.pi * fr_alpha)
    sG = np.sin(np.pi * fr_G_alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (sG / s1) ** 2
    return np.where(s1 == 0.0, float(G) ** 2, out)


def offdiag_sum(x: int, theta: Theta, _fr: np.ndarray | None = None) -> complex:
    """sum over off-diagonal solutions with all entries <= x of
    e((m1+m2-n1-n2) theta), via the gh/ab parametrization.

    Grouped by the coprime pair (a, b): the inner (g, h) box contributes
    the Fejer square minus its diagonal, |geom(G, v theta)|^2 - G with
    G = x // max(a, b) and v = a - b.  Real by conjugate symmetry.
    """
    if x < 2:
        if x < 0:
            raise ValueError("x must be >= 0")
        return 0j
    fr = theta.fractional_parts(x) if _fr is None else _fr
    vs, cum = _coprime_diffs(x // 2) if x >= 4 else (np.array([], dtype=np.int64), np.zeros(2, dtype=np.int64))
    total = 0.0
    for m in range(2, x // 2 + 1):
        G = x // m
        if G < 2:
            break
        block = vs[cum[m - 1] : cum[m]]
        if len(block) == 0:
            continue
        fej = _fejer_sq(fr[block - 1], fr[G * block - 1], G)
        total += 2.0 * float(np.sum(fej - G))
    return complex(total)


def offdiag_sum_brute(x: int, theta: Theta) -> complex:
    """Independent oracle: bucket ordered pairs (m1, m2) by product and sum
    |Z_v|^2 over buckets, Z_v = sum of e((m1+m2) theta), then drop the
    2x^2 - x diagonal quadruples (all of phase 1)."""
    if x < 1:
        return 0j
    phases = np.exp(2j * np.pi * theta.fractional_parts(2 * x))
    buckets: dict[int, complex] = defaultdict(complex)
    for m1 in range(1, x + 1):
        for m2 in range(1, x + 1):
            buckets[m1 * m2] += phases[m1 + m2 - 1]
    total = math.fsum(abs(z) ** 2 for z in buckets.values())
    return complex(total - (2 * x * x - x))


def offdiag_count_profile(x_max: int) -> np.ndarray:
    """Exact number of off-diagonal quadruples for every x <= x_max, from
    the parametrization (integer arithmetic only)."""
    vs, cum = _coprime_diffs(max(1, x_max // 2))
    counts = np.zeros(x_max + 1, dtype=np.int64)
    for x in range(2, x_max + 1):
        total = 0
        for m in range(2, x // 2 + 1):
            G = x // m
            if G < 2:
                break
            total += 2 * int(cum[m] - cum[m - 1]) * (G * G - G)
        counts[x] = total
    return counts


def offdiag_count_profile_brute(x_max: int) -> np.ndarray:
    """The same counts by incremental product bucketing: when x grows, the
    new ordered pairs (x, t), (t, x), (x, x) move sum c_v^2 by a known
    amount; subtract the 2x^2 - x diagonal at each step."""
    counts = np.zeros(x_max + 1, dtype=np.int64)
    buckets: dict[int, int] = defaultdict(int)
    running = 0
    for x in range(1, x_max + 1):
        new_pairs = [x * t for t in range(1, x)] * 2 + [x * x]
        for v in new_pairs:
            running += 2 * buckets[v] + 1
            buckets[v] += 1
        counts[x] = running - (2 * x * x - x)
    return counts


def offdiag_quadruples(x: int):
    """Literal enumeration of off-diagonal solutions (test oracle, tiny x)."""
    for m1 in range(1, x + 1):
        for m2 in range(1, x + 1):
            p = m1 * m2
            for n1 in range(1, x + 1):
                if p % n1:
                    continue
                n2 = p // n1
                if n2 <= x and {m1, m2} != {n1, n2}:
                    yield (m1, m2, n1, n2)


@dataclass
class InnerComparison:
    """The Moebius-unfolded inner sum at fixed (g, h) against the direct
    coprime-pair sum; they differ by exactly the a = b = 1 term."""

    g: int
    h: int
    x: int
    mobius_value: float
    direct_value: float

    @property
    def difference(self) -> float:
        return self.mobius_value - self.direct_value


def _mobius_sieve(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int64)
    primes_mask = np.ones(n + 1, dtype=bool)
    for p in range(2, n + 1):
        if primes_mask[p]:
            primes_mask[2 * p :: p] = False
            mu[p::p] *= -1
            sq = p * p
            if sq <= n:
                mu[sq::sq] = 0
    return mu


def mobius_unfolded_inner(g: int, h: int, x: int, theta: Theta) -> InnerComparison:
    """sum_k mu(k) |sum_{r <= x/(k max(g,h))} e(k(g-h) r theta)|^2 versus the
    direct sum over coprime (a, b) with a != b in the same box.

    Requires g != h and max(g, h) <= sqrt(x).
    """
    M = max(g, h)
    if g == h:
        raise ValueError("g and h must differ")
    if M * M > x:
        raise ValueError("max(g, h) must be at most sqrt(x)")
    L = x // M
    u = abs(g - h)
    fr = theta.fractional_parts(x)
    mu = _mobius_sieve(L)
    mob_terms = []
    for k in range(1, L + 1):
        if mu[k] == 0:
            continue
        G = L // k
        fej = _fejer_sq(fr[np.array([k * u - 1])], fr[np.array([G * k * u - 1])], G)
        mob_terms.append(mu[k] * float(fej[0]))
    mobius_value = math.fsum(mob_terms)
    direct_value = _direct_coprime_sum(u, L, fr)
    return InnerComparison(g, h, x, mobius_value, direct_value)


def _direct_coprime_sum(u: int, L: int, fr: np.ndarray) -> float:
    """sum over ordered coprime pairs a != b <= L of e(u(a-b) theta)."""
    vs, cum = _coprime_diffs(L)
    total = 0.0
    for m in range(2, L + 1):
        block = vs[cum[m - 1] : cum[m]]
        if len(block):
            total += 2.0 * float(np.sum(np.cos(2 * np.pi * fr[u * block - 1])))
    return total


@dataclass
class ScaleDecomposition:
    """The off-diagonal sum split at sqrt(x): S1 has max(g,h) <= sqrt(x),
    S2 has max(a,b) <= sqrt(x), S3 both; S1 + S2 - S3 re-assembles the
    whole sum exactly.  Each case is further split by whether the active
    difference (g-h for S1, a-b for S2/S3) lies in the resonant set."""

    x: int
    case1: float
    case2: float
    case3: float
    case1_resonant: float
    case2_resonant: float
    offdiag: float
    gh_stratum_count: int

    @property
    def total(self) -> float:
        return self.case1 + self.case2 - self.case3

    @property
    def gh_ratio(self) -> float:
        return self.gh_stratum_count / self.x**1.5

    @property
    def ratio_to_x2(self) -> float:
        return abs(self.offdiag) / self.x**2

    def to_row(self) -> dict:
        return {
            "x": self.x, "case1": self.case1, "case2": self.case2, "case3": self.case3,
            "case1_resonant": self.case1_resonant, "case2_resonant": self.case2_resonant,
            "offdiag": self.offdiag, "gh_count": self.gh_stratum_count,
            "gh_ratio": self.gh_ratio, "ratio_to_x2": self.ratio_to_x2,
        }


def scale_decomposition(x: int, theta: Theta, eps: float = 0.1, resonant: ResonantSet | None = None) -> ScaleDecomposition:
    """Exact inclusion-exclusion decomposition at scale sqrt(x) (x >= 16)."""
    if x < 16:
        raise ValueError("x must be >= 16")
    s = isqrt(x)
    fr = theta.fractional_parts(x)
    res = resonant if resonant is not None else resonant_set(theta, x, eps)
    vs, cum = _coprime_diffs(x // 2)

    case1 = case1_res = 0.0
    for G in range(2, s + 1):
        L = x // G
        for u in range(1, G):
            t = 2.0 * _direct_coprime_sum(u, L, fr)
            case1 += t
            if u in res:
                case1_res += t

    case2 = case2_res = case3 = 0.0
    gh_count = 0
    for m in range(2, s + 1):
        block = vs[cum[m - 1] : cum[m]]
        if len(block) == 0:
            continue
        G = x // m
        fej_full = _fejer_sq(fr[block - 1], fr[G * block - 1], G)
        fej_s = _fejer_sq(fr[block - 1], fr[s * block - 1], s)
        contrib2 = 2.0 * (fej_full - G)
        contrib3 = 2.0 * (fej_s - s)
        case2 += float(np.sum(contrib2))
        case3 += float(np.sum(contrib3))
        in_res = np.fromiter((int(v) in res for v in block), dtype=bool, count=len(block))
        case2_res += float(np.sum(contrib2[in_res]))
        gh_count += 2 * len(block) * G
    off = offdiag_sum(x, theta, _fr=fr).real
    return ScaleDecomposition(x, case1, case2, case3, case1_res, case2_res, off, gh_count)
