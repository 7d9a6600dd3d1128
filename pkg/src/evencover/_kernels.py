"""Kernel dispatch: compiled extension when importable, else pure Python.

Set ``EVENCOVER_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels as python_impl

compiled_impl = None
if not os.environ.get("EVENCOVER_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_impl  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled_impl = None

impl = compiled_impl if compiled_impl is not None else python_impl
BACKEND = "compiled" if compiled_impl is not None else "python"

reduce_rows = impl.reduce_rows
min_weight_subset = impl.min_weight_subset
shortest_unique_color_walk = impl.shortest_unique_color_walk

__all__ = [
    "BACKEND",
    "compiled_impl",
    "python_impl",
    "reduce_rows",
    "min_weight_subset",
    "shortest_unique_color_walk",
]
