# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled congruence-counting kernels (hot loops of the counting module).

Mirrors _kernels_py exactly; all counts are exact int64 arithmetic.  The
inner loops release the GIL so sweeps can be threaded from Python.
"""

from libc.stdlib cimport calloc, free

ctypedef long long i64

IMPL = "cython"


cdef inline i64 _iabs(i64 a) noexcept nogil:
    return -a if a < 0 else a


cdef inline i64 _gcd(i64 a, i64 b) noexcept nogil:
    cdef i64 t
    a = _iabs(a)
    b = _iabs(b)
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef inline i64 _fdiv(i64 a, i64 b) noexcept nogil:
    # floor division (C division truncates toward zero)
    cdef i64 q = a / b
    if a % b != 0 and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline i64 _cdiv(i64 a, i64 b) noexcept nogil:
    return -_fdiv(-a, b)


cdef inline i64 _modinv(i64 a, i64 m) noexcept nogil:
    # inverse of a mod m, assuming gcd(a, m) = 1 and m >= 1
    cdef i64 g = m, x = 0, x1 = 1, q, t
    a = a % m
    if a < 0:
        a += m
    while a:
        q = g / a
        t = g - q * a; g = a; a = t
        t = x - q * x1; x = x1; x1 = t
    if x < 0:
        x += m
    return x


cdef inline i64 _progression_count(i64 lo, i64 hi, i64 b0, i64 step) noexcept nogil:
    if hi < lo:
        return 0
    return _fdiv(hi - b0, step) - _fdiv(lo - 1 - b0, step)


cdef i64 _nsp_count(i64 S, i64 P, i64 L) noexcept nogil:
    cdef i64 D, M, ML, count, a, g, step, b0, blo, bhi, V, pairs
    if L < 0:
        return 0
    if S == 0:
        V = -4 * P
        if V == 0:
            pairs = 4 * L + 1
        else:
            pairs = 0
            for a in range(-L, L + 1):
                if a != 0 and V % a == 0 and -L <= V / a <= L:
                    pairs += 1
        return pairs * (2 * L + 1)
    D = S * S - 4 * P
    M = 2 * _iabs(S)
    ML = M * L
    count = 0
    if D % M == 0 and -L <= D / (2 * S) <= L:
        count += 2 * L + 1
    for a in range(-L, L + 1):
        if a == 0:
            continue
        g = _gcd(a, M)
        if D % g != 0:
            continue
        step = M / g
        b0 = ((D / g) % step) * _modinv(a / g, step) % step
        if b0 < 0:
            b0 += step
        if a > 0:
            blo = _cdiv(D - ML, a)
            bhi = _fdiv(D + ML, a)
        else:
            blo = _cdiv(D + ML, a)
            bhi = _fdiv(D - ML, a)
        if blo < -L:
            blo = -L
        if bhi > L:
            bhi = L
        count += _progression_count(blo, bhi, b0, step)
    return count


def nsp_count(S, P, L):
    cdef i64 cS = S, cP = P, cL = L, out
    with nogil:
        out = _nsp_count(cS, cP, cL)
    return out


def nsp_count_batch(S, Ps, L):
    cdef i64[::1] view = Ps
    cdef i64 cS = S, cL = L, total = 0
    cdef Py_ssize_t i, n = view.shape[0]
    with nogil:
        for i in range(n):
            total += _nsp_count(cS, view[i], cL)
    return total


def nsp_brute(S, P, L):
    cdef i64 cS = S, cP = P, cL = L
    cdef i64 D, M, a, b, rem, count = 0
    if cL < 0:
        return 0
    D = cS * cS - 4 * cP
    with nogil:
        if cS == 0:
            for a in range(-cL, cL + 1):
                for b in range(-cL, cL + 1):
                    if a * b == -4 * cP:
                        count += 1
            count *= 2 * cL + 1
        else:
            M = 2 * _iabs(cS)
            for a in range(-cL, cL + 1):
                for b in range(-cL, cL + 1):
                    rem = D - a * b
                    if rem % M == 0 and _iabs(rem) <= M * cL:
                        count += 1
    return count


def n4_bucket(vals, r):
    cdef i64[::1] view = vals
    cdef i64 cr = r, total = 0, p
    cdef Py_ssize_t i, j, n = view.shape[0]
    cdef i64* buckets = <i64*> calloc(cr, sizeof(i64))
    if buckets is NULL:
        raise MemoryError
    try:
        with nogil:
            for i in range(n):
                for j in range(n):
                    p = (view[i] * view[j]) % cr
                    buckets[p] += 1
            for p in range(cr):
                total += buckets[p] * buckets[p]
    finally:
        free(buckets)
    return total
