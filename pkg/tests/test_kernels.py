import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixedsums import _kernels_py
from mixedsums._backend import BACKEND, kernels

try:
    from mixedsums import _kernels as compiled
except ImportError:
    compiled = None

BACKENDS = [("python", _kernels_py)] + ([("cython", compiled)] if compiled else [])


def test_backend_reports_implementation():
    assert BACKEND in ("python", "cython")
    assert kernels.IMPL == BACKEND


@pytest.mark.skipif(compiled is None, reason="compiled extension not built")
def test_backends_agree_on_grid():
    for S in range(-10, 11):
        for P in range(-15, 16):
            for L in (0, 1, 2, 5, 9):
                assert compiled.nsp_count(S, P, L) == _kernels_py.nsp_count(S, P, L)
                assert compiled.nsp_brute(S, P, L) == _kernels_py.nsp_brute(S, P, L)


@given(
    st.integers(min_value=-60, max_value=60),
    st.integers(min_value=-500, max_value=500),
    st.integers(min_value=0, max_value=30),
)
def test_count_matches_brute(S, P, L):
    assert kernels.nsp_count(S, P, L) == kernels.nsp_brute(S, P, L)


def test_batch_equals_singles():
    Ps = np.ascontiguousarray(np.arange(-40, 41, 3, dtype=np.int64))
    for impl_name, impl in BACKENDS:
        total = impl.nsp_count_batch(7, Ps, 25)
        assert total == sum(impl.nsp_count(7, int(P), 25) for P in Ps), impl_name


def test_n4_bucket_matches_pairwise():
    rng = np.random.default_rng(5)
    for r in (11, 101, 1009):
        vals = np.ascontiguousarray(rng.integers(0, r, size=40, dtype=np.int64))
        prods = (vals[:, None] * vals[None, :]).ravel() % r
        ref = int(np.count_nonzero(prods[:, None] == prods[None, :]))
        for impl_name, impl in BACKENDS:
            assert impl.n4_bucket(vals, r) == ref, impl_name


@pytest.mark.skipif(compiled is None, reason="compiled extension not built")
def test_n4_backends_agree_large():
    rng = np.random.default_rng(17)
    vals = np.ascontiguousarray(rng.integers(0, 10007, size=800, dtype=np.int64))
    assert compiled.n4_bucket(vals, 10007) == _kernels_py.n4_bucket(vals, 10007)


def test_benchmark_harness_runs():
    from mixedsums.bench import format_table, run_benchmarks

    rows = run_benchmarks(T=25, r=101, n4_size=120)
    assert any(r["backend"] == "python" for r in rows)
    by_workload = {}
    for row in rows:
        by_workload.setdefault(row["workload"], set()).add(row["result"])
    for results in by_workload.values():
        assert len(results) == 1  # all backends produce identical counts
    assert "workload" in format_table(rows)
