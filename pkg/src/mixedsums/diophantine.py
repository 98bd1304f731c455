"""Certified arithmetic for the rotation angle theta.

Three kinds of angle are supported, all reduced mod 1 at construction:

* quadratic irrationals (p + q*sqrt(d))/s, handled exactly through integer
  arithmetic (isqrt enclosures, exact continued fractions);
* named high-precision constants (pi, e), carried as fixed-point integer
  enclosures of configurable width 2^-bits;
* explicit rationals, for contrast experiments, carried as exact fractions.

Every distance-to-nearest-integer query returns an interval, and threshold
comparisons refuse to answer (raise PrecisionError) when the interval
straddles the cut -- nothing is ever silently rounded through a decision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

DEFAULT_BITS = 256

# Threshold fuzz used when a float cutoff (like C*exp(-q^(1/4))) has to be
# compared against an exact enclosure: the float is widened to a tiny
# interval of relative radius 2^-40 before comparing.
_FUZZ_NUM = 1 << 40


class PrecisionError(ArithmeticError):
    """The working precision cannot certify the requested decision."""


@dataclass(frozen=True)
class Enclosure:
    """Exact rational interval [lo, hi] certified to contain a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty enclosure")

    @property
    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __float__(self) -> float:
        return self.mid

    def certified_le(self, threshold: Fraction) -> bool:
        """Decide value <= threshold, or raise if the interval straddles it."""
        if self.hi <= threshold:
            return True
        if self.lo > threshold:
            return False
        raise PrecisionError(f"enclosure {self} straddles threshold {threshold}")

    def certified_ge(self, threshold: Fraction) -> bool:
        if self.lo >= threshold:
            return True
        if self.hi < threshold:
            return False
        raise PrecisionError(f"enclosure {self} straddles threshold {threshold}")

    def __repr__(self) -> str:
        return f"Enclosure({float(self.lo):.6g}..{float(self.hi):.6g})"


def _fuzz_interval(x: float) -> tuple[Fraction, Fraction]:
    """A tiny exact interval around a positive float threshold."""
    f = Fraction(x)
    return f * Fraction(_FUZZ_NUM - 1, _FUZZ_NUM), f * Fraction(_FUZZ_NUM + 1, _FUZZ_NUM)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _const_mantissa(name: str, prec: int) -> int:
    """Integer M with |const * 2^prec - M| <= 2, cross-checked at two
    working precisions so a library regression cannot slip through."""
    import mpmath

    def compute(guard: int) -> int:
        with mpmath.workprec(prec + guard):
            v = {"pi": mpmath.mp.pi, "e": mpmath.mp.e}[name]
            return int(mpmath.floor(mpmath.ldexp(+v, prec)))

    m1, m2 = compute(24), compute(56)
    if abs(m1 - m2) > 1:
        raise PrecisionError(f"inconsistent high-precision values for {name}")
    return m2


def _floor_surd(P: int, R: int, Q: int) -> int:
    """floor((P + sqrt(D))/Q) given R = isqrt(D) with sqrt(D) irrational."""
    if Q > 0:
        return (P + R) // Q
    # value = -(P + sqrt(D))/|Q| with sqrt(D) in (R, R+1); the open interval
    # ((P+R)/|Q|, (P+R+1)/|Q|) contains no integer, so the floor is exact.
    return -((P + R) // (-Q)) - 1


@dataclass(frozen=True)
class CFExpansion:
    """Partial quotients [a0; a1, a2, ...] and convergents p_i/q_i."""

    quotients: list[int]
    convergents: list[tuple[int, int]]

    @property
    def denominators(self) -> list[int]:
        return [q for _, q in self.convergents]


def _convergents(quotients: list[int]) -> list[tuple[int, int]]:
    p0, q0, p1, q1 = 0, 1, 1, 0
    out = []
    for a in quotients:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


class Theta:
    """An angle theta in [0, 1) with certified arithmetic.

    Use the constructors ``Theta.sqrt(d)``, ``Theta.quadratic(p, q, d, s)``,
    ``Theta.constant("pi"|"e")``, ``Theta.rational(a, b)`` or the CLI form
    ``Theta.parse("sqrt:2" | "const:pi" | "const:e" | "rat:a/q")``.
    """

    def __init__(self, kind: str, bits: int = DEFAULT_BITS, label: str = "", **data):
        self.kind = kind
        self.bits = bits
        self.label = label
        self._data = data
        self._mantissa_cache: dict[int, tuple[int, int]] = {}
        if kind == "quadratic":
            p, q, d, s = data["p"], data["q"], data["d"], data["s"]
            if s <= 0 or q <= 0 or d <= 1 or isqrt(d) ** 2 == d:
                raise ValueError("need s > 0, q > 0 and a non-square d > 1")
            shift = self._quadratic_floor(p, q, d, s)
            self._p, self._q, self._d, self._s = p - shift * s, q, d, s
        elif kind == "constant":
            name = data["name"]
            if name not in ("pi", "e"):
                raise ValueError(f"unknown constant {name!r}")
            self._name = name
            self._prec0 = bits + 64
            m_raw = _const_mantissa(name, self._prec0)
            self._int_part = m_raw >> self._prec0
            self._m0 = m_raw - (self._int_part << self._prec0)
        elif kind == "rational":
            f = data["value"]
            self._fraction = f - (f.numerator // f.denominator)
        else:
            raise ValueError(f"unknown Theta kind {kind!r}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def sqrt(cls, d: int, bits: int = DEFAULT_BITS) -> "Theta":
        return cls("quadratic", bits=bits, label=f"sqrt:{d}", p=0, q=1, d=d, s=1)

    @classmethod
    def quadratic(cls, p: int, q: int, d: int, s: int, bits: int = DEFAULT_BITS) -> "Theta":
        return cls("quadratic", bits=bits, label=f"({p}+{q}*sqrt({d}))/{s}", p=p, q=q, d=d, s=s)

    @classmethod
    def constant(cls, name: str, bits: int = DEFAULT_BITS) -> "Theta":
        return cls("constant", bits=bits, label=f"const:{name}", name=name)

    @classmethod
    def rational(cls, a: int, b: int, bits: int = DEFAULT_BITS) -> "Theta":
        if b == 0:
            raise ValueError("zero denominator")
        return cls("rational", bits=bits, label=f"rat:{a}/{b}", value=Fraction(a, b))

    @classmethod
    def parse(cls, spec: str, bits: int = DEFAULT_BITS) -> "Theta":
        head, _, tail = spec.partition(":")
        if head == "sqrt":
            return cls.sqrt(int(tail), bits=bits)
        if head == "const":
            return cls.constant(tail, bits=bits)
        if head == "rat":
            a, _, b = tail.partition("/")
            return cls.rational(int(a), int(b or "1"), bits=bits)
        raise ValueError(f"cannot parse theta spec {spec!r} (use sqrt:d, const:pi, const:e, rat:a/q)")

    # -- representation ----------------------------------------------------

    @staticmethod
    def _quadratic_floor(p: int, q: int, d: int, s: int) -> int:
        prec = 96
        N = p << prec
        R = isqrt(d << (2 * prec))
        lo = (N + q * R) // s
        hi = _ceil_div(N + q * R + q, s)
        if (lo >> prec) != (hi >> prec):
            raise PrecisionError("quadratic floor needs more precision")
        return lo >> prec

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    @property
    def exact_fraction(self) -> Fraction | None:
        return self._fraction if self.kind == "rational" else None

    def mantissa(self, prec: int) -> tuple[int, int]:
        """Integers (lo, hi) with lo <= theta * 2^prec <= hi, hi-lo small."""
        cached = self._mantissa_cache.get(prec)
        if cached is not None:
            return cached
        if self.kind == "quadratic":
            N = self._p << prec
            R = isqrt(self._d << (2 * prec))
            lo = (N + self._q * R) // self._s
            hi = _ceil_div(N + self._q * R + self._q, self._s)
        elif self.kind == "constant":
            if prec <= self._prec0 - 8:
                sh = self._prec0 - prec
                lo = (self._m0 - 2) >> sh
                hi = ((self._m0 + 2) >> sh) + 1
            else:
                m = _const_mantissa(self._name, prec + 64) - (self._int_part << (prec + 64))
                lo, hi = (m - 2) >> 64, ((m + 2) >> 64) + 1
        else:
            f = self._fraction
            lo = (f.numerator << prec) // f.denominator
            hi = _ceil_div(f.numerator << prec, f.denominator)
        self._mantissa_cache[prec] = (lo, hi)
        return lo, hi

    def enclosure(self, prec: int | None = None) -> Enclosure:
        prec = self.bits if prec is None else prec
        lo, hi = self.mantissa(prec)
        return Enclosure(Fraction(lo, 1 << prec), Fraction(hi, 1 << prec))

    def __float__(self) -> float:
        return self.enclosure(64).mid

    @property
    def value(self) -> float:
        return float(self)

    def __repr__(self) -> str:
        return f"Theta({self.label or self.kind}, ~{float(self):.12f})"

    # -- fractional parts and distances -------------------------------------

    def fractional_parts(self, n_max: int, prec: int = 320) -> np.ndarray:
        """frac(n*theta) for n = 1..n_max as float64, each within 1e-15.

        The reduction happens on the integer mantissa (never by repeated
        float addition, which drifts by n ulps), blocked so only O(sqrt(n))
        big-integer products are needed.
        """
        if n_max < 1:
            return np.empty(0)
        if self.kind == "rational":
            a, b = self._fraction.numerator, self._fraction.denominator
            n = np.arange(1, n_max + 1, dtype=np.int64)
            if a * (n_max + 1) < 2**62:
                return ((n * a) % b) / b
            return np.array([(i * a % b) / b for i in range(1, n_max + 1)])
        lo, hi = self.mantissa(prec)
        T = (lo + hi) >> 1
        m = 1 << prec
        fm = float(m)
        K = isqrt(n_max) + 1
        lows = np.array([((i * T) % m) / fm for i in range(K)])
        J = n_max // K + 1
        KT = K * T
        highs = np.array([((j * KT) % m) / fm for j in range(J + 1)])
        grid = (highs[:, None] + lows[None, :]) % 1.0
        return grid.ravel()[1 : n_max + 1]

    def dist_nearest_int(self, q: int) -> Enclosure:
        """Certified enclosure of ||q*theta|| = min_n |q*theta - n|."""
        if q < 0:
            raise ValueError("q must be nonnegative")
        if q == 0:
            return Enclosure(Fraction(0), Fraction(0))
        if self.kind == "rational":
            f = (q * self._fraction) % 1
            d = min(f, 1 - f)
            return Enclosure(d, d)
        prec = self.bits + 8
        lo, hi = self.mantissa(prec)
        a, b = q * lo, q * hi
        m = 1 << prec
        if b - a >= m:
            raise PrecisionError(f"||q*theta|| for q={q} exceeds the precision budget")
        base = (a // m) * m
        a, b = a - base, b - base

        def tent(t: int) -> int:
            tm = t % m
            return min(tm, m - tm)

        zero_inside = a == 0 or (a <= m <= b)
        peak_inside = (a <= m // 2 <= b) or (a <= (3 * m) // 2 <= b)
        dlo = 0 if zero_inside else min(tent(a), tent(b))
        dhi = (m + 1) // 2 if peak_inside else max(tent(a), tent(b))
        return Enclosure(Fraction(dlo, m), Fraction(dhi, m))

    # -- continued fractions -------------------------------------------------

    def continued_fraction(self, depth: int) -> CFExpansion:
        """Partial quotients and convergents of theta (reduced mod 1).

        Quadratic irrationals are expanded exactly; rationals terminate;
        interval-backed constants raise PrecisionError at the first quotient
        the enclosure cannot certify.
        """
        if depth < 1:
            raise ValueError("depth must be >= 1")
        if self.kind == "quadratic":
            quotients = self._cf_quadratic(depth)
        elif self.kind == "rational":
            quotients = self._cf_rational(depth)
        else:
            quotients = self._cf_interval(depth)
        return CFExpansion(quotients, _convergents(quotients))

    def _cf_quadratic(self, depth: int) -> list[int]:
        p, q, d, s = self._p, self._q, self._d, self._s
        P, D, Q = p * s, d * q * q * s * s, s * s
        R = isqrt(D)
        out = []
        for _ in range(depth):
            a = _floor_surd(P, R, Q)
            out.append(a)
            P = a * Q - P
            Q = (D - P * P) // Q
        return out

    def _cf_rational(self, depth: int) -> list[int]:
        num, den = self._fraction.numerator, self._fraction.denominator
        out = []
        while den and len(out) < depth:
            a, rem = divmod(num, den)
            out.append(a)
            num, den = den, rem
        return out

    def _cf_interval(self, depth: int) -> list[int]:
        lo, hi = self.mantissa(self.bits)
        x_lo = Fraction(lo, 1 << self.bits)
        x_hi = Fraction(hi, 1 << self.bits)
        out = []
        for i in range(depth):
            a_lo, a_hi = x_lo.numerator // x_lo.denominator, x_hi.numerator // x_hi.denominator
            if a_lo != a_hi:
                raise PrecisionError(f"continued fraction certified only to depth {i}")
            out.append(a_lo)
            f_lo, f_hi = x_lo - a_lo, x_hi - a_lo
            if f_lo <= 0:
                raise PrecisionError(f"continued fraction certified only to depth {i + 1}")
            x_lo, x_hi = 1 / f_hi, 1 / f_lo
        return out

    def dist_via_convergents(self, q: int, depth: int = 64) -> float:
        """||q*theta|| recomputed through the Ostrowski expansion of q in
        convergent denominators; an independent arithmetic route used to
        cross-check ``dist_nearest_int``."""
        cf = self.continued_fraction(depth)
        prec = self.bits
        lo, hi = self.mantissa(prec)
        T = (lo + hi) >> 1
        m = 1 << prec
        deltas = [(qi * T - (pi << prec)) / m for pi, qi in cf.convergents]
        total = 0.0
        rem = q
        for (pi, qi), delta in zip(reversed(cf.convergents), reversed(deltas)):
            if qi <= rem:
                b = rem // qi
                rem -= b * qi
                total += b * delta
        if rem:
            raise ValueError(f"q={q} exceeds the expansion range; increase depth")
        d = abs(total) % 1.0
        return min(d, 1.0 - d)


# -- condition checks and derived sets ---------------------------------------


@dataclass(frozen=True)
class DiophantineProfile:
    """A decreasing floor Upsilon for |q*theta - a|: either C*exp(-q^c) or
    the badly-approximable profile C/q^2."""

    kind: str = "exp"
    C: float = 1.0
    c: float = 0.25

    def __post_init__(self):
        if self.kind not in ("exp", "power"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.C <= 0 or self.c <= 0:
            raise ValueError("profile parameters must be positive")

    def __call__(self, q: float) -> float:
        if self.kind == "exp":
            return self.C * math.exp(-(q**self.c))
        return self.C / q**2


@dataclass
class FloorCheckResult:
    passed: bool
    C: float
    exponent: float
    q_max: int
    failure_q: int | None
    witness_q: int
    witness_ratio: float
    indeterminate: list[int]


def check_diophantine_floor(theta: Theta, C: float, Q: int, exponent: float = 0.25) -> FloorCheckResult:
    """Verify ||q*theta|| >= C*exp(-q^exponent) for all 1 <= q <= Q.

    Comparisons use interval semantics: a straddling enclosure is reported
    in ``indeterminate`` rather than silently passed.  The witness is the q
    minimising ||q*theta|| / exp(-q^exponent).
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    best_q, best_ratio = 1, math.inf
    indeterminate: list[int] = []
    failure_q = None
    for q in range(1, Q + 1):
        enc = theta.dist_nearest_int(q)
        floor_val = C * math.exp(-(q**exponent))
        ratio = enc.mid / math.exp(-(q**exponent))
        if ratio < best_ratio:
            best_q, best_ratio = q, ratio
        t_lo, t_hi = _fuzz_interval(floor_val)
        if enc.lo >= t_hi:
            continue
        if enc.hi < t_lo:
            if failure_q is None:
                failure_q = q
        else:
            indeterminate.append(q)
    passed = failure_q is None and not indeterminate
    return FloorCheckResult(passed, C, exponent, Q, failure_q, best_q, best_ratio, indeterminate)


@dataclass
class ResonantSet:
    """Integers l with |l| <= sqrt(x) such that some k <= (log x)^(1+eps)
    drags k*l*theta within x^(-1/3) of an integer.

    0 always belongs.  ``witnesses[l]`` is the smallest certifying k, and
    ``min_gap`` is the least distance between distinct members (the spacing
    statistic of interest).
    """

    x: float
    eps: float
    k_max: int
    threshold: float
    members: list[int]
    witnesses: dict[int, int]
    indeterminate: list[int]

    @property
    def min_gap(self) -> int | None:
        if len(self.members) < 2:
            return None
        ms = sorted(self.members)
        return min(b - a for a, b in zip(ms, ms[1:]))

    def __contains__(self, ell: int) -> bool:
        return ell in self._member_set

    def __post_init__(self):
        self._member_set = set(self.members)


def resonant_set(theta: Theta, x: float, eps: float = 0.1) -> ResonantSet:
    """Exhaustive scan for the resonant set at scale x (x >= 16, eps > 0)."""
    if x < 16:
        raise ValueError("x must be >= 16")
    if eps <= 0:
        raise ValueError("eps must be positive")
    L = isqrt(int(x))
    k_max = max(1, int(math.log(x) ** (1 + eps)))
    thr = x ** (-1 / 3)
    t_lo, t_hi = _fuzz_interval(thr)
    members = [0]
    witnesses = {0: 1}
    indeterminate: list[int] = []
    for ell in range(1, L + 1):
        witness = None
        saw_straddle = False
        for k in range(1, k_max + 1):
            enc = theta.dist_nearest_int(k * ell)
            if enc.hi <= t_lo:
                witness = k
                break
            if enc.lo <= t_hi:
                saw_straddle = True
        if witness is not None:
            members.extend((ell, -ell))
            witnesses[ell] = witnesses[-ell] = witness
        elif saw_straddle:
            indeterminate.append(ell)
    return ResonantSet(x, eps, k_max, thr, sorted(members), witnesses, indeterminate)


def reduce_mod_r(theta: Theta, r: int) -> tuple[int, Enclosure]:
    """k = floor(r*theta) and the leftover theta' = theta - k/r in [0, 1/r)."""
    if theta.kind == "rational":
        f = theta.exact_fraction
        k = (r * f.numerator) // f.denominator
        tp = r * f - k
        return k, Enclosure(tp / r, tp / r)
    prec = theta.bits + 8
    lo, hi = theta.mantissa(prec)
    rlo, rhi = r * lo, r * hi
    k_lo, k_hi = rlo >> prec, rhi >> prec
    if k_lo != k_hi:
        raise PrecisionError(f"r*theta is within the interval width of an integer (r={r})")
    k = int(k_lo)
    denom = r << prec
    enc = Enclosure(
        max(Fraction(0), Fraction(rlo - (k << prec), denom)),
        Fraction(rhi - (k << prec), denom),
    )
    return k, enc
