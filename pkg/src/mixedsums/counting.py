"""Exact congruence point counts paired with their analytic envelopes.

Every operation returns the exact integer count of a finite set together
with the bound the analysis predicts for it, so the ratio count/bound can
be tracked across parameter grids.  The counts themselves are exact (integer
arithmetic only, via the compiled or pure kernel backend); the bounds carry
unspecified absolute constants, so ratios are recorded, never proved.

The central objects:

* N(d, q)      -- pairs (a, b) mod q with ab = d (mod q);
* N_{S,P}(T)   -- integer triples a, b, c in a box with ab + 2cS = S^2 - 4P;
* the quadruple count over an interval I of (m1, m2, n1, n2) with
  (k+m1)(k+m2) = (k+n1)(k+n2) (mod r), counted meet-in-the-middle;
* the pigeonhole count of (S, P) in [1,N] x [-M,M] with kS = P (mod r),
  together with the near-approximation pair (q, d) it extracts;
* the full sweep sum_{S, P admissible} N_{S,P}(T) against T^2 + T^4/r.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .arith import divisor_count, divisors, totient

__all__ = [
    "CountReport",
    "SurfacePoint",
    "quadruple_to_surface",
    "count_ab_congruence",
    "count_ab_congruence_all",
    "count_ab_brute_all",
    "count_surface_box",
    "count_surface_box_brute",
    "count_quadruple_congruence",
    "count_quadruple_brute",
    "pigeonhole_count",
    "PigeonholeReport",
    "surface_sweep",
    "SweepReport",
    "hyperbola_class_count",
    "hyperbola_class_brute",
    "dyadic_tail_sum",
    "DyadicTailReport",
]


@dataclass(frozen=True)
class CountReport:
    kind: str
    params: dict
    count: int
    bound: float

    @property
    def ratio(self) -> float:
        return self.count / self.bound if self.bound > 0 else math.inf

    def to_row(self) -> dict:
        row = {"kind": self.kind}
        row.update(self.params)
        row.update(count=self.count, bound=self.bound, ratio=self.ratio)
        return row


# -- the folded quadruple coordinates ----------------------------------------


@dataclass(frozen=True)
class SurfacePoint:
    """Image (a, b, c) of a quadruple under the folding map, with its
    invariants S = m1+m2-n1-n2 and P = n1n2 - m1m2 attached.

    Lies on the quadric ab + 2cS = S^2 - 4P; the map is injective on each
    fixed-(S, P) fibre because (a, b, c, S) are independent linear forms.
    """

    S: int
    P: int
    a: int
    b: int
    c: int

    @property
    def on_surface(self) -> bool:
        return self.a * self.b + 2 * self.c * self.S == self.S * self.S - 4 * self.P


def quadruple_to_surface(m1: int, m2: int, n1: int, n2: int) -> SurfacePoint:
    """Fold (m1, m2, n1, n2) to (n1-n2+m1-m2, n1-n2-m1+m2, m1+m2)."""
    return SurfacePoint(
        S=m1 + m2 - n1 - n2,
        P=n1 * n2 - m1 * m2,
        a=n1 - n2 + m1 - m2,
        b=n1 - n2 - m1 + m2,
        c=m1 + m2,
    )


# -- N(d, q) ------------------------------------------------------------------


def count_ab_congruence(d: int, q: int) -> CountReport:
    """N(d, q) = #{(a, b) in (Z/q)^2 : ab = d (mod q)}, exactly.

    For each divisor g of gcd(d, q) there are phi(q/g) values of a with
    gcd(a, q) = g, each admitting g solutions in b; the envelope column is
    tau(gcd(d, q)) * q.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    d = d % q
    g0 = math.gcd(d, q)
    count = sum(g * totient(q // g) for g in divisors(g0))
    return CountReport("ab_congruence", {"d": d, "q": q}, count, divisor_count(g0) * q)


def count_ab_congruence_all(q: int) -> np.ndarray:
    """N(d, q) for every d mod q at once (fast path)."""
    counts = np.zeros(q, dtype=np.int64)
    for g in divisors(q):
        counts[::g] += g * totient(q // g)
    return counts


def count_ab_brute_all(q: int) -> np.ndarray:
    """N(d, q) for every d by brute histogram of the full (a, b) grid."""
    a = np.arange(q, dtype=np.int64)
    prod = (a[:, None] * a[None, :]) % q
    return np.bincount(prod.ravel(), minlength=q)


# -- N_{S,P}(T) ----------------------------------------------------------------


def _surface_bound(S: int, P: int, T: int, eps: float = 0.05) -> float:
    if S != 0:
        t_over_s = T / abs(S)
        return t_over_s * math.log(2 + t_over_s) * count_ab_congruence(-4 * P, abs(S)).count
    if P == 0:
        return float(T * T)
    return T * abs(P) ** eps


def count_surface_box(S: int, P: int, T: int, box_constant: float = 1.0) -> CountReport:
    """N_{S,P}(T): triples |a|, |b|, |c| <= box_constant*T on the quadric
    ab + 2cS = S^2 - 4P.  Exact O(T) count; the bound column comes from the
    hyperbola estimate (T/|S|) log(2+T/|S|) N(-4P, |S|) for S != 0, and from
    the degenerate strata T^2 (P = 0) or T|P|^eps (P != 0) at S = 0.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    L = int(box_constant * T)
    count = int(kernels.nsp_count(S, P, L))
    return CountReport(
        "surface_box",
        {"S": S, "P": P, "T": T, "box_constant": box_constant},
        count,
        _surface_bound(S, P, T),
    )


def count_surface_box_brute(S: int, P: int, T: int, box_constant: float = 1.0) -> int:
    """O(T^2) oracle for ``count_surface_box``."""
    return int(kernels.nsp_brute(S, P, int(box_constant * T)))


# -- the quadruple count over a dual interval ---------------------------------


def _as_members(interval) -> np.ndarray:
    if isinstance(interval, tuple) and len(interval) == 2:
        lo, hi = interval
        return np.arange(lo, hi + 1, dtype=np.int64)
    return np.asarray(sorted(int(m) for m in interval), dtype=np.int64)


def count_quadruple_congruence(interval, k: int, r: int, exact_limit: int = 2000) -> CountReport:
    """#{(m1, m2, n1, n2) in M^4 : (k+m1)(k+m2) = (k+n1)(k+n2) mod r} where
    M = {m in I : m != -k mod r}, via meet-in-the-middle bucketing of the
    pair products (O(|I|^2) instead of O(|I|^4)).

    The bound column is the sweep envelope T^2 + T^4/r evaluated at the
    covering box T = 4*max|m| reached by the folded coordinates.
    """
    members = _as_members(interval)
    if len(members) > exact_limit:
        raise ValueError(f"exact path limited to {exact_limit} members, got {len(members)}")
    keep = (members + k) % r != 0
    vals = np.ascontiguousarray((members[keep] + k) % r, dtype=np.int64)
    count = int(kernels.n4_bucket(vals, r)) if len(vals) else 0
    m_max = int(np.max(np.abs(members))) if len(members) else 0
    t_box = 4 * m_max if m_max else 1
    return CountReport(
        "quadruple_congruence",
        {"n_members": len(members), "n_excluded": int(len(members) - keep.sum()), "k": k, "r": r},
        count,
        t_box**2 + t_box**4 / r,
    )


def count_quadruple_brute(interval, k: int, r: int) -> int:
    """All-pairs-of-pairs oracle (no bucketing), for small member sets."""
    members = _as_members(interval)
    if len(members) > 60:
        raise ValueError("brute quadruple count limited to 60 members")
    keep = (members + k) % r != 0
    vals = (members[keep] + k) % r
    prod = (vals[:, None] * vals[None, :]).ravel() % r
    return int(np.count_nonzero(prod[:, None] == prod[None, :]))


# -- the pigeonhole count and its extracted witness ----------------------------


@dataclass(frozen=True)
class PigeonholeReport:
    count: int
    bound: float
    N: int
    M: int
    k: int
    r: int
    c: float
    in_regime: bool
    witness: tuple[int, int] | None  # (q, d) with kq = d (mod r), |d| <= 2M

    @property
    def ratio(self) -> float:
        return self.count / self.bound if self.bound > 0 else math.inf

    def to_row(self) -> dict:
        return {
            "kind": "pigeonhole",
            "N": self.N, "M": self.M, "k": self.k, "r": self.r, "c": self.c,
            "count": self.count, "bound": self.bound, "ratio": self.ratio,
            "witness_q": None if self.witness is None else self.witness[0],
            "witness_d": None if self.witness is None else self.witness[1],
            "in_regime": self.in_regime,
        }


def pigeonhole_count(N: int, M: int, k: int, r: int, c: float = 1 / 3) -> PigeonholeReport:
    """Exact #{(S, P) in [1,N] x [-M,M] : kS = P (mod r)} against the
    envelope N / (log(2 + r/M))^(1/c).

    Also extracts the near-approximation pair: a difference (or single
    solution) (q, d) = (S_i - S_j, P_i - P_j) with kq = d (mod r) and
    |d| <= 2M, choosing the smallest q.  None when the box is empty.
    """
    if N < 1 or M < 0:
        raise ValueError("need N >= 1 and M >= 0")
    solutions: list[tuple[int, int]] = []
    count = 0
    for S in range(1, N + 1):
        rho = (k * S) % r
        t_min = -((-(rho - M)) // r)
        t_max = (rho + M) // r
        for t in range(t_min, t_max + 1):
            solutions.append((S, rho - t * r))
            count += 1
    witness = None
    candidates = list(solutions)
    for (s1, p1), (s2, p2) in zip(solutions, solutions[1:]):
        if s2 > s1:
            candidates.append((s2 - s1, p2 - p1))
    for q, d in candidates:
        if q >= 1 and abs(d) <= 2 * M and (witness is None or (q, abs(d)) < (witness[0], abs(witness[1]))):
            witness = (q, d)
    bound = N / math.log(2 + r / M) ** (1 / c) if M > 0 else float(N)
    return PigeonholeReport(count, bound, N, M, k, r, c, r > M >= N >= 1, witness)


# -- the full (S, P) sweep ------------------------------------------------------


@dataclass(frozen=True)
class SweepReport:
    T: int
    r: int
    k: int
    box_constant: float
    total: int
    s0_total: int
    bound: float
    s0_bound: float
    eps: float

    @property
    def ratio(self) -> float:
        return self.total / self.bound

    @property
    def s0_ratio(self) -> float:
        return self.s0_total / self.s0_bound

    def to_row(self) -> dict:
        return {
            "kind": "surface_sweep", "T": self.T, "r": self.r, "k": self.k,
            "count": self.total, "bound": self.bound, "ratio": self.ratio,
            "s0_count": self.s0_total, "s0_bound": self.s0_bound, "s0_ratio": self.s0_ratio,
        }


def _sweep_one_s(args) -> int:
    S, T, r, k, L = args
    rho = (k * S) % r
    hi = T * T
    t_min = -((-(rho - hi)) // r)
    t_max = (rho + hi) // r
    if t_max < t_min:
        return 0
    Ps = rho - np.arange(t_min, t_max + 1, dtype=np.int64) * r
    return int(kernels.nsp_count_batch(S, np.ascontiguousarray(Ps), L))


def surface_sweep(
    T: int,
    r: int,
    k: int,
    box_constant: float = 1.0,
    eps: float = 0.05,
    threads: int | None = None,
) -> SweepReport:
    """sum of N_{S,P}(T) over the admissible classes |S| <= T, |P| <= T^2,
    kS = P (mod r), against the envelope T^2 + T^4/r.

    The S = 0 stratum (P = 0 mod r) is counted too and reported separately
    against its own envelope T^2 + (T^2/r) T^(1+2*eps).  Work splits by S;
    partial sums are integers, so any schedule gives identical output.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    L = int(box_constant * T)
    tasks = [(S, T, r, k, L) for S in range(-T, T + 1) if S != 0]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            nonzero = sum(ex.map(_sweep_one_s, tasks))
    else:
        nonzero = sum(map(_sweep_one_s, tasks))
    s0_total = 0
    t_bound = (T * T) // r
    for t in range(-t_bound, t_bound + 1):
        s0_total += int(kernels.nsp_count(0, t * r, L))
    bound = T * T + T**4 / r
    s0_bound = T * T + (T * T / r) * T ** (1 + 2 * eps)
    return SweepReport(T, r, k, box_constant, nonzero + s0_total, s0_total, bound, s0_bound, eps)


# -- congruence-class hyperbola counts ------------------------------------------


def hyperbola_class_count(u: int, v: int, S: int, T: int, P: int, box_constant: float = 1.0) -> int:
    """#{|a|, |b| <= box_constant*T : (a, b) = (u, v) mod S, |ab + 4P| <= T*S}.

    Exact count realising the per-class hyperbola estimate
    (T/S) log(2 + T/S); O(T/S) arithmetic.
    """
    if not (1 <= u <= S and 1 <= v <= S and S <= T):
        raise ValueError("need 1 <= u, v <= S <= T")
    L = int(box_constant * T)
    W = T * S
    count = 0
    t_min = -((-(-L - u)) // S)
    t_max = (L - u) // S
    for t in range(t_min, t_max + 1):
        a = u + t * S
        if a == 0:
            if abs(4 * P) <= W:
                count += (L - v) // S - (-L - 1 - v) // S
            continue
        lo_ab, hi_ab = -4 * P - W, -4 * P + W
        if a > 0:
            blo, bhi = -((-lo_ab) // a), hi_ab // a
        else:
            blo, bhi = -((-hi_ab) // a), lo_ab // a
        blo, bhi = max(blo, -L), min(bhi, L)
        if bhi >= blo:
            count += (bhi - v) // S - (blo - 1 - v) // S
    return count


def hyperbola_class_brute(u: int, v: int, S: int, T: int, P: int, box_constant: float = 1.0) -> int:
    L = int(box_constant * T)
    side = np.arange(-L, L + 1)
    amask = (side - u) % S == 0
    bmask = (side - v) % S == 0
    ab = np.outer(side[amask], side[bmask])
    return int(np.count_nonzero(np.abs(ab + 4 * P) <= T * S))


# -- the dyadic tail sums --------------------------------------------------------


@dataclass(frozen=True)
class DyadicTailReport:
    s: int
    j_max: int
    partial: float
    tail_bound: float

    @property
    def upper(self) -> float:
        return self.partial + self.tail_bound

    @property
    def ratio(self) -> float:
        return self.upper / max(1, self.s)


def dyadic_tail_sum(s: int, j_max: int) -> DyadicTailReport:
    """D(s) = sum_{j >= max(1, s)} j / max(1, j-s)^3, evaluated to j_max with
    a rigorous integral tail bound; D(s)/max(1, s) stays below 4.

    For j > j_max every term is (i+s)/i^3 with i = j-s > j_max-s, and
    sum_{i > I} 1/i^2 < 1/I, sum_{i > I} 1/i^3 < 1/(2 I^2).
    """
    j0 = max(1, s)
    if j_max < j0 + 10:
        raise ValueError("j_max must be at least max(1, s) + 10")
    j = np.arange(j0, j_max + 1, dtype=np.float64)
    partial = float(np.sum(j / np.maximum(1.0, j - s) ** 3))
    I = j_max - s
    tail = 1.0 / I + max(0, s) / (2.0 * I * I)
    report = DyadicTailReport(s, j_max, partial, tail)
    if report.ratio > 4.0:
        raise ArithmeticError(f"dyadic tail ratio {report.ratio:.3f} exceeded 4 at s={s}")
    return report
