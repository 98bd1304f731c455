"""Cutoff weights supported on [0, 1].

The default is the standard bump w(t) = exp(-1/(t(1-t))) on (0, 1), which is
smooth on all of R (every one-sided derivative vanishes at 0 and 1) -- the
dual-side integration by parts needs that.  ``flat`` is the sharp indicator
of (0, 1], kept for the unweighted short-sum experiments, and arbitrary
sampled weights can be wrapped for exploratory runs.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad


class WeightFunction:
    def __init__(self, kind: str, fn, smooth: bool, label: str | None = None):
        self.kind = kind
        self._fn = fn
        self.smooth = smooth
        self.label = label or kind
        self._integral_cache: dict[int, float] = {}

    @classmethod
    def bump(cls) -> "WeightFunction":
        def fn(t: np.ndarray) -> np.ndarray:
            out = np.zeros_like(t)
            mask = (t > 0.0) & (t < 1.0)
            tm = t[mask]
            with np.errstate(over="ignore", divide="ignore"):
                out[mask] = np.exp(-1.0 / (tm * (1.0 - tm)))
            return out

        return cls("bump", fn, smooth=True)

    @classmethod
    def flat(cls) -> "WeightFunction":
        return cls("flat", lambda t: ((t > 0.0) & (t <= 1.0)).astype(float), smooth=False)

    @classmethod
    def from_samples(cls, ts, vs) -> "WeightFunction":
        ts = np.asarray(ts, dtype=float)
        vs = np.asarray(vs, dtype=float)
        if ts.min() < 0.0 or ts.max() > 1.0:
            raise ValueError("sample grid must lie in [0, 1]")

        def fn(t: np.ndarray) -> np.ndarray:
            out = np.interp(t, ts, vs, left=0.0, right=0.0)
            return np.where((t < 0.0) | (t > 1.0), 0.0, out)

        return cls("sampled", fn, smooth=False)

    @classmethod
    def from_name(cls, name: str) -> "WeightFunction":
        if name == "bump":
            return cls.bump()
        if name == "flat":
            return cls.flat()
        raise ValueError(f"unknown weight {name!r} (use bump or flat)")

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        out = self._fn(np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out

    def moment_integral(self, power: int = 2) -> float:
        """int_0^1 w(t)^power dt, by adaptive quadrature, cached."""
        if power not in self._integral_cache:
            if self.kind == "flat":
                val = 1.0
            else:
                val, err = quad(lambda t: self(t) ** power, 0.0, 1.0, epsabs=1e-15, epsrel=1e-13, limit=200)
                if err > 1e-11:
                    raise ArithmeticError(f"weight quadrature did not converge (err={err:.2e})")
            self._integral_cache[power] = float(val)
        return self._integral_cache[power]

    @property
    def integral_sq(self) -> float:
        return self.moment_integral(2)

    @property
    def integral(self) -> float:
        return self.moment_integral(1)

    def __repr__(self) -> str:
        return f"WeightFunction({self.label})"
