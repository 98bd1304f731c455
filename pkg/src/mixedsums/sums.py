"""Mixed character sums S(chi) = sum_{n<=x} chi(n) e(n*theta) w(n/x) and
their moments over the full family of characters mod r.

The family-wide evaluation groups terms by discrete log, A_t = sum over
{n : ind(n) = t} of e(n*theta) w(n/x), and recovers every S(chi_j) as the
length-(r-1) inverse DFT of A -- O(r log r) for arbitrary r-1 (the FFT
backend falls back to Bluestein for prime-ish lengths), against O(r x) for
the direct path.  Both paths share one certified phase table, so they can
be compared entrywise.

The expectation E_chi averages over all r-1 characters, principal included;
with that normalisation the second moment is an exact finite identity,
E_chi |S|^2 = sum_{n <= min(x, r-1)} w(n/x)^2, which the tests exploit as
a zero-tolerance oracle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, asdict

import numpy as np

from .arith import PrimeModulus
from .characters import Character
from .diophantine import Theta
from .weights import WeightFunction


def additive_phases(theta: Theta, n_max: int) -> np.ndarray:
    """e(n*theta) for n = 1..n_max, from the certified fractional parts."""
    return np.exp(2j * np.pi * theta.fractional_parts(n_max))


def _term_table(pm: PrimeModulus, x: float, theta: Theta, w: WeightFunction):
    """Per-n factors shared by the direct and DFT paths: e(n theta) w(n/x)
    and the discrete logs of n mod r (with -1 marking multiples of r)."""
    N = int(math.floor(x))
    n = np.arange(1, N + 1)
    base = additive_phases(theta, N) * w(n / x)
    idx = pm.ind[n % pm.r]
    return n, base, idx


def mixed_sum(pm: PrimeModulus, chi: Character | int, x: float, theta: Theta, w: WeightFunction) -> complex:
    """Direct O(x) evaluation of sum_{1<=n<=x} chi(n) e(n*theta) w(n/x)."""
    if isinstance(chi, int):
        chi = Character(pm, chi)
    if x < 1:
        return 0j
    _, base, idx = _term_table(pm, x, theta, w)
    mask = idx >= 0
    values = pm.order_roots[(chi.j * idx[mask]) % (pm.r - 1)]
    return complex(np.sum(values * base[mask]))


@dataclass
class FamilySums:
    modulus: PrimeModulus
    x: float
    theta: Theta
    weight: WeightFunction
    values: np.ndarray  # values[j] = S(chi_j), j = 0..r-2
    method: str

    def entry(self, j: int) -> complex:
        return complex(self.values[j % (self.modulus.r - 1)])


def family_sums(
    pm: PrimeModulus, x: float, theta: Theta, w: WeightFunction, method: str = "dft"
) -> FamilySums:
    """All r-1 mixed sums at once.

    method="dft" is the O(r log r) production path; method="direct" loops
    over characters and exists to oracle the transform.
    """
    if x > pm.r:
        warnings.warn(f"x={x} exceeds r={pm.r}; the second-moment identity no longer applies")
    r = pm.r
    if x < 1:
        return FamilySums(pm, x, theta, w, np.zeros(r - 1, dtype=complex), method)
    _, base, idx = _term_table(pm, x, theta, w)
    mask = idx >= 0
    idxu = idx[mask]
    baseu = base[mask]
    if method == "dft":
        acc_re = np.bincount(idxu, weights=baseu.real, minlength=r - 1)
        acc_im = np.bincount(idxu, weights=baseu.imag, minlength=r - 1)
        values = (r - 1) * np.fft.ifft(acc_re + 1j * acc_im)
    elif method == "direct":
        values = np.empty(r - 1, dtype=complex)
        for j in range(r - 1):
            values[j] = np.sum(pm.order_roots[(j * idxu) % (r - 1)] * baseu)
    else:
        raise ValueError(f"unknown method {method!r}")
    return FamilySums(pm, x, theta, w, values, method)


@dataclass
class MomentReport:
    r: int
    x: float
    abs_moment_1: float
    moment_2: float
    moment_4: float
    normalized_1: float  # E|S| / sqrt(x)
    normalized_2: float  # E|S|^2 / x
    normalized_4: float  # E|S|^4 / x^2
    second_moment_ref: float  # sum_{n <= min(x, r-1)} w(n/x)^2

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def second_moment_rel_error(self) -> float:
        return abs(self.moment_2 - self.second_moment_ref) / self.second_moment_ref


def moment_report(fs: FamilySums) -> MomentReport:
    """First, second and fourth absolute moments over the family, plus the
    exact second-moment reference. Accumulations use compensated summation
    so the identity checks are limited by the inputs, not the reduction."""
    pm, x, w = fs.modulus, fs.x, fs.weight
    count = pm.r - 1
    a = np.abs(fs.values)
    m1 = math.fsum(a.tolist()) / count
    a2 = a * a
    m2 = math.fsum(a2.tolist()) / count
    m4 = math.fsum((a2 * a2).tolist()) / count
    n_ref = min(int(math.floor(x)), pm.r - 1)
    if n_ref >= 1:
        ref = math.fsum((w(np.arange(1, n_ref + 1) / x) ** 2).tolist())
    else:
        ref = 0.0
    sx = math.sqrt(x) if x > 0 else math.nan
    return MomentReport(
        pm.r, x, m1, m2, m4,
        m1 / sx if x > 0 else math.nan,
        m2 / x if x > 0 else math.nan,
        m4 / (x * x) if x > 0 else math.nan,
        ref,
    )


@dataclass
class GeometricSumCheck:
    y: int
    alpha: float
    direct: complex
    closed_form: complex | None
    alpha_dist: float
    bound_ratio: float  # |sum| / min(y, 1/(2||alpha||))


def geometric_sum(y: int, alpha: float) -> GeometricSumCheck:
    """sum_{1<=n<=y} e(n*alpha), both directly and in closed form
    e(alpha)(1 - e(y*alpha))/(1 - e(alpha)); the two must agree to 1e-10.

    The closed form is skipped when alpha is an integer (the sum is exactly
    y).  The reported ratio compares |sum| against min(y, 1/(2||alpha||)).
    """
    if y < 0:
        raise ValueError("y must be >= 0")
    alpha = float(alpha)
    frac = alpha - math.floor(alpha)
    dist = min(frac, 1.0 - frac)
    if y == 0:
        return GeometricSumCheck(y, alpha, 0j, None, dist, 0.0)
    n = np.arange(1, y + 1)
    direct = complex(np.sum(np.exp(2j * np.pi * ((n * frac) % 1.0))))
    if dist == 0.0:
        return GeometricSumCheck(y, alpha, complex(y), None, dist, 1.0)
    z = np.exp(2j * np.pi * frac)
    zy = np.exp(2j * np.pi * ((y * frac) % 1.0))
    closed = z * (1 - zy) / (1 - z)
    if abs(direct - closed) > 1e-10 * max(1.0, abs(closed)):
        raise ArithmeticError(
            f"geometric sum paths disagree: {direct} vs {closed} (y={y}, alpha={alpha})"
        )
    ratio = abs(direct) / min(y, 1.0 / (2.0 * dist))
    return GeometricSumCheck(y, alpha, direct, complex(closed), dist, ratio)


@dataclass
class DistributionReport:
    """Empirical statistics of Z = S(chi)/sqrt(E|S|^2) across the family.

    Under the complex-Gaussian hypothesis |Z|^2 is unit exponential, so
    E|Z| -> sqrt(pi)/2 ~ 0.8862, E|Z|^4 -> 2, and ks_exponential measures
    the Kolmogorov-Smirnov distance of |Z|^2 from Exp(1).  Diagnostic only:
    nothing here asserts convergence.
    """

    r: int
    x: float
    abs_mean: float
    abs_sq_mean: float
    abs_4_mean: float
    mean: complex
    square_mean: complex
    ks_exponential: float
    reference_abs_mean: float = math.sqrt(math.pi) / 2
    reference_abs_4: float = 2.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["mean"] = [self.mean.real, self.mean.imag]
        d["square_mean"] = [self.square_mean.real, self.square_mean.imag]
        return d


def distribution_probe(pm: PrimeModulus, x: float, theta: Theta, w: WeightFunction) -> DistributionReport:
    """Normalised family statistics probing complex-Gaussian behaviour."""
    if pm.r < 101:
        raise ValueError("distribution probe needs r >= 101 for a meaningful family")
    fs = family_sums(pm, x, theta, w)
    m2 = float(np.mean(np.abs(fs.values) ** 2))
    z = fs.values / math.sqrt(m2)
    az = np.abs(z)
    az2 = az * az
    u = np.sort(az2)
    cdf = 1.0 - np.exp(-u)
    n = len(u)
    grid = np.arange(n)
    ks = float(np.max(np.maximum(cdf - grid / n, (grid + 1) / n - cdf)))
    return DistributionReport(
        pm.r, x,
        float(np.mean(az)),
        float(np.mean(az2)),
        float(np.mean(az2 * az2)),
        complex(np.mean(z)),
        complex(np.mean(z * z)),
        ks,
    )
