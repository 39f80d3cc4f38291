"""Kernel backend selection.

The compiled extension is used when present; setting HEXSEP_PURE=1 forces
the numpy/scipy fallback.  Both backends expose the same three functions
and produce identical output; `benchmarks/bench_kernels.py` compares their
speed.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("HEXSEP_PURE") == "1":
    _impl = _kernels_py
    BACKEND = "fallback"
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "fallback"

HAVE_EXT = BACKEND == "compiled"

radius_pairs = _impl.radius_pairs
union_labels = _impl.union_labels
max_fraction_sweep = _impl.max_fraction_sweep
