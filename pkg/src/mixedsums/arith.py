"""Modular and multiplicative arithmetic primitives.

Everything here is deterministic and desk-scale: primality is a Miller-Rabin
test with a witness set exhaustive far beyond 64 bits, primitive roots are
the smallest ones (so character labels are stable across runs), discrete
logs are stored densely (one int64 per residue), and the classical
arithmetic functions mu, tau, phi go through trial-division factorisation.
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

# Witnesses proving primality for every n < 3.3e24 (covers all 64-bit input).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test, exact for all 64-bit integers."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n, by sieve."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division; fine for desk-scale inputs."""
    if n <= 0:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n: int) -> int:
    """mu(n): (-1)^k on squarefree n with k prime factors, else 0."""
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def divisor_count(n: int) -> int:
    """tau(n), the number of positive divisors."""
    return math.prod(e + 1 for e in factorize(n).values())


def divisors(n: int) -> list[int]:
    """All positive divisors of n, sorted."""
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def totient(n: int) -> int:
    """phi(n), the number of units mod n."""
    out = n
    for p in factorize(n):
        out -= out // p
    return out


def primitive_root(r: int) -> int:
    """Smallest g >= 1 of multiplicative order r-1 mod the prime r."""
    if not is_prime(r):
        raise ValueError(f"{r} is not prime")
    if r == 2:
        return 1
    group = r - 1
    prime_factors = list(factorize(group))
    for g in range(2, r):
        if all(pow(g, group // p, r) != 1 for p in prime_factors):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


def build_index_table(r: int, g: int) -> np.ndarray:
    """Dense discrete-log table: table[t] = ind(t) with g**ind(t) = t mod r.

    table[0] = -1 is a sentinel for the non-unit residue.  Rejects g of
    non-maximal order (the powers of g then fail to cover all units).
    """
    if not is_prime(r):
        raise ValueError(f"{r} is not prime")
    table = np.full(r, -1, dtype=np.int64)
    v = 1
    for i in range(r - 1):
        if table[v] != -1:
            raise ValueError(f"{g} is not a primitive root mod {r}")
        table[v] = i
        v = v * g % r
    if v != 1:
        raise ValueError(f"{g} is not a unit of maximal order mod {r}")
    return table


class PrimeModulus:
    """A prime r together with its smallest primitive root and index table.

    ``ind[t]`` is the discrete log of the unit t base g (ind[0] = -1), so
    the characters mod r are exactly chi_j(t) = e(j*ind[t]/(r-1)) for
    j = 0, ..., r-2.  Instances are immutable after construction and safe
    to share across worker threads.
    """

    def __init__(self, r: int, g: int | None = None):
        if not is_prime(r):
            raise ValueError(f"modulus {r} is not prime")
        self.r = int(r)
        self.g = primitive_root(self.r) if g is None else int(g)
        self.ind = build_index_table(self.r, self.g)
        self.ind.setflags(write=False)

    @cached_property
    def order_roots(self) -> np.ndarray:
        """e(t/(r-1)) for t = 0..r-2, the character value alphabet."""
        n = self.r - 1
        tab = np.exp(2j * np.pi * np.arange(n) / n)
        tab.setflags(write=False)
        return tab

    @cached_property
    def additive_roots(self) -> np.ndarray:
        """e(t/r) for t = 0..r-1, used by Gauss sums and dual coefficients."""
        tab = np.exp(2j * np.pi * np.arange(self.r) / self.r)
        tab.setflags(write=False)
        return tab

    def index_of(self, n: int) -> int:
        """ind(n mod r); -1 when r divides n."""
        return int(self.ind[n % self.r])

    def __repr__(self) -> str:
        return f"PrimeModulus(r={self.r}, g={self.g})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeModulus) and other.r == self.r

    def __hash__(self) -> int:
        return hash(("PrimeModulus", self.r))
