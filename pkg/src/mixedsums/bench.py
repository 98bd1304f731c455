"""Benchmark the compiled kernels against the pure-Python fallback.

Both backends produce identical integers; this compares wall time on the
two hot counting loops (the admissible-class sweep and the
meet-in-the-middle quadruple bucketing).
"""

from __future__ import annotations

import time

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None


def _time_sweep(kernels, T: int, r: int, k: int) -> tuple[float, int]:
    t0 = time.perf_counter()
    total = 0
    for S in range(-T, T + 1):
        if S == 0:
            continue
        rho = (k * S) % r
        hi = T * T
        t_min = -((-(rho - hi)) // r)
        t_max = (rho + hi) // r
        if t_max < t_min:
            continue
        Ps = np.ascontiguousarray(rho - np.arange(t_min, t_max + 1, dtype=np.int64) * r)
        total += int(kernels.nsp_count_batch(S, Ps, T))
    return time.perf_counter() - t0, total


def _time_n4(kernels, n: int, r: int) -> tuple[float, int]:
    vals = np.ascontiguousarray((np.arange(n, dtype=np.int64) * 7919 + 13) % r)
    t0 = time.perf_counter()
    total = int(kernels.n4_bucket(vals, r))
    return time.perf_counter() - t0, total


def run_benchmarks(T: int = 200, r: int = 1009, k: int | None = None, n4_size: int = 1500) -> list[dict]:
    """Returns one row per (workload, backend) with seconds and the count."""
    if k is None:
        k = int(r * 0.4142135623730951)
    rows = []
    backends = [(_kernels_py.IMPL, _kernels_py)]
    if _compiled is not None:
        backends.append((_compiled.IMPL, _compiled))
    for name, impl in backends:
        secs, total = _time_sweep(impl, T, r, k)
        rows.append({"workload": f"sweep T={T} r={r}", "backend": name, "seconds": secs, "result": total})
        secs, total = _time_n4(impl, n4_size, 10007)
        rows.append({"workload": f"n4 bucket n={n4_size}", "backend": name, "seconds": secs, "result": total})
    return rows


def format_table(rows: list[dict]) -> str:
    by_workload: dict[str, dict[str, dict]] = {}
    for row in rows:
        by_workload.setdefault(row["workload"], {})[row["backend"]] = row
    lines = [f"{'workload':<28}{'backend':<10}{'seconds':>10}  result"]
    for workload, impls in by_workload.items():
        for backend, row in impls.items():
            lines.append(f"{workload:<28}{backend:<10}{row['seconds']:>10.4f}  {row['result']}")
        if "python" in impls and "cython" in impls:
            speedup = impls["python"]["seconds"] / max(impls["cython"]["seconds"], 1e-12)
            same = impls["python"]["result"] == impls["cython"]["result"]
            lines.append(f"{'':<28}{'speedup':<10}{speedup:>10.1f}x  identical={same}")
    return "\n".join(lines)
