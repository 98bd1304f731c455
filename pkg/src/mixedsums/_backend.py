"""Kernel backend selection.

The compiled extension is preferred when present; the pure-Python kernels
are a drop-in replacement (identical integer results).  Set MIXEDSUMS_PURE=1
to force the pure backend, e.g. for benchmarking the two against each other.
"""

import os

from . import _kernels_py

if os.environ.get("MIXEDSUMS_PURE"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.IMPL
