"""Kernel backend chosen at import: the compiled ``_ckernels`` when it is built,
otherwise the pure-Python ``_pykernels``. Set ``LPA_PURE_PYTHON=1`` to force the
fallback.
"""

import os

from . import _pykernels as python_backend

if os.environ.get("LPA_PURE_PYTHON", "") not in ("", "0"):
    compiled_backend = None
else:
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

set_key = python_backend.set_key
hsat_sets = backend.hsat_sets
breaking_mask = backend.breaking_mask
condition_holds = backend.condition_holds
row_finite_holds = backend.row_finite_holds
witness_pairs = backend.witness_pairs
graph_classes = backend.graph_classes
decide_kinds = backend.decide_kinds
compatible_counts = backend.compatible_counts


def count_paths(n, mult, x, y, v):
    """Compatible path count (-1 = infinitely many); exact even past 64 bits."""
    try:
        return backend.count_paths(n, mult, x, y, v)
    except OverflowError:
        return python_backend.count_paths(n, mult, x, y, v)
