"""Pure-Python congruence-counting kernels.

Same contract as the compiled extension ``_kernels``; selected as a fallback
at import time (see ``_backend``).  Counts are exact integers, so results
are identical between backends and under any work split.
"""

from __future__ import annotations

from math import gcd

import numpy as np

IMPL = "python"


def _progression_count(lo: int, hi: int, b0: int, step: int) -> int:
    """#{b in [lo, hi] : b = b0 (mod step)}."""
    if hi < lo:
        return 0
    return (hi - b0) // step - (lo - 1 - b0) // step


def nsp_count(S: int, P: int, L: int) -> int:
    """Exact #{|a|,|b|,|c| <= L : ab + 2cS = S^2 - 4P}.

    For S != 0, c is determined by (a, b), so this is an O(L) sweep over a
    with a linear congruence and a window condition on b.  For S = 0 the
    equation degenerates to ab = -4P with c free.
    """
    if L < 0:
        return 0
    if S == 0:
        V = -4 * P
        if V == 0:
            pairs = 4 * L + 1
        else:
            pairs = 0
            for a in range(-L, L + 1):
                if a != 0 and V % a == 0 and -L <= V // a <= L:
                    pairs += 1
        return pairs * (2 * L + 1)
    D = S * S - 4 * P
    M = 2 * abs(S)
    ML = M * L
    count = 0
    if D % M == 0 and -L <= D // (2 * S) <= L:
        count += 2 * L + 1  # a = 0 stratum: b free
    for a in range(-L, L + 1):
        if a == 0:
            continue
        g = gcd(a, M)
        if D % g:
            continue
        step = M // g
        b0 = (D // g) * pow((a // g) % step, -1, step) % step
        if a > 0:
            blo, bhi = -((-(D - ML)) // a), (D + ML) // a
        else:
            blo, bhi = -((-(D + ML)) // a), (D - ML) // a
        count += _progression_count(max(blo, -L), min(bhi, L), b0, step)
    return count


def nsp_count_batch(S: int, Ps: np.ndarray, L: int) -> int:
    return sum(nsp_count(S, int(P), L) for P in Ps)


def nsp_brute(S: int, P: int, L: int) -> int:
    """O(L^2) reference count over the full (a, b) grid."""
    if L < 0:
        return 0
    side = np.arange(-L, L + 1)
    ab = np.outer(side, side)
    D = S * S - 4 * P
    if S == 0:
        return int(np.count_nonzero(ab == -4 * P)) * (2 * L + 1)
    M = 2 * abs(S)
    rem = D - ab
    ok = (rem % M == 0) & (np.abs(rem) <= M * L)
    return int(np.count_nonzero(ok))


def n4_bucket(vals: np.ndarray, r: int) -> int:
    """sum over residues p of (#{(i,j) : vals[i]*vals[j] = p mod r})^2
    computed as squared bucket sizes -- the meet-in-the-middle count of
    quadruples with vals[i1]*vals[i2] = vals[i3]*vals[i4] (mod r)."""
    vals = np.asarray(vals, dtype=np.int64)
    counts = np.zeros(r, dtype=np.int64)
    chunk = max(1, (1 << 22) // max(1, len(vals)))
    for start in range(0, len(vals), chunk):
        prod = (vals[start : start + chunk, None] * vals[None, :]) % r
        counts += np.bincount(prod.ravel(), minlength=r)
    return int(np.dot(counts, counts))
