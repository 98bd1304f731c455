"""Dirichlet characters mod a prime r, their Gauss sums, and the discrete
Fourier coefficients of chi(t)e((k+m)t/r) that drive the dual-side analysis.

The family is labelled by j in {0,...,r-2} relative to the smallest
primitive root g: chi_j(n) = e(j*ind(n)/(r-1)) on units, 0 on multiples
of r.  Labels compose additively, chi_j * chi_l = chi_{j+l mod r-1}, and
j = 0 is the principal character.  All values come from one precomputed
root-of-unity table per modulus, so repeated evaluation never drifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .arith import PrimeModulus


@dataclass(frozen=True)
class Character:
    modulus: PrimeModulus
    j: int

    def __post_init__(self):
        object.__setattr__(self, "j", self.j % (self.modulus.r - 1))

    @property
    def is_principal(self) -> bool:
        return self.j == 0

    def __call__(self, n: int) -> complex:
        return character_value(self, n)

    def values_at(self, ns: np.ndarray) -> np.ndarray:
        """Vectorised chi(n) over an integer array."""
        pm = self.modulus
        res = np.asarray(ns) % pm.r
        idx = pm.ind[res]
        out = pm.order_roots[(self.j * idx) % (pm.r - 1)]
        return np.where(idx < 0, 0.0, out)

    def conjugate(self) -> "Character":
        return Character(self.modulus, -self.j)

    def __mul__(self, other: "Character") -> "Character":
        if other.modulus.r != self.modulus.r:
            raise ValueError("characters to different moduli")
        return Character(self.modulus, self.j + other.j)


@dataclass(frozen=True)
class GaussData:
    """tau(chi) and its normalisation C(chi) = tau(chi)/sqrt(r).

    |tau(chi)| = sqrt(r) for non-principal chi, tau(chi_0) = -1; hence
    |C(chi)| = 1 off the principal character and |C(chi_0)| = 1/sqrt(r).
    """

    character: Character
    value: complex
    normalized: complex


def character_value(chi: Character, n: int) -> complex:
    """chi(n): a root of unity of order dividing r-1, or 0 when r | n."""
    pm = chi.modulus
    t = n % pm.r
    if t == 0:
        return 0j
    idx = int(pm.ind[t])
    return complex(pm.order_roots[(chi.j * idx) % (pm.r - 1)])


def all_characters(pm: PrimeModulus) -> list[Character]:
    return [Character(pm, j) for j in range(pm.r - 1)]


def gauss_sum(chi: Character) -> GaussData:
    """tau(chi) = sum_t chi(t) e(t/r) by direct O(r) summation."""
    pm = chi.modulus
    units = np.arange(1, pm.r)
    vals = pm.order_roots[(chi.j * pm.ind[units]) % (pm.r - 1)]
    tau = complex(np.sum(vals * pm.additive_roots[units]))
    return GaussData(chi, tau, tau / sqrt(pm.r))


def dual_coefficient(chi: Character, m: int, k: int) -> complex:
    """(1/r) sum_{t mod r} chi(t) e((k+m)t/r), evaluated as a finite sum.

    Equals chi(k+m)^{-1} tau(chi)/r whenever r does not divide k+m, and
    (r-1)/r (principal chi) or 0 (otherwise) when r | k+m.
    """
    pm = chi.modulus
    u = (k + m) % pm.r
    units = np.arange(1, pm.r)
    cv = pm.order_roots[(chi.j * pm.ind[units]) % (pm.r - 1)]
    ev = pm.additive_roots[(u * units) % pm.r]
    return complex(np.sum(cv * ev)) / pm.r


def dual_coefficient_factored(chi: Character, m: int, k: int, gauss: GaussData | None = None) -> complex:
    """Closed form of ``dual_coefficient`` via the Gauss-sum factorisation."""
    pm = chi.modulus
    u = (k + m) % pm.r
    if u == 0:
        return complex((pm.r - 1) / pm.r) if chi.is_principal else 0j
    if gauss is None:
        gauss = gauss_sum(chi)
    chibar_u = character_value(chi.conjugate(), u)
    return chibar_u * gauss.value / pm.r


def character_matrix(pm: PrimeModulus) -> np.ndarray:
    """(r-1) x (r-1) matrix M[j, t-1] = chi_j(t); rows are the characters."""
    n = pm.r - 1
    units = np.arange(1, pm.r)
    idx = pm.ind[units]
    jj = np.arange(n)[:, None]
    return pm.order_roots[(jj * idx[None, :]) % n]
