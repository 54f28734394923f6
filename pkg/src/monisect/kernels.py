"""Backend selection for the hot loops.

The compiled extension is used when it imports; ``MONISECT_PURE=1`` forces the
pure-Python fallback (used by the parity tests and the benchmark).
"""
from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("MONISECT_PURE") == "1":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"
FOUND_NONE = _pykernels.FOUND_NONE
OVER_BUDGET = _pykernels.OVER_BUDGET

fold = _impl.fold
prefix_images = _impl.prefix_images
suffix_images = _impl.suffix_images
coordinate_bfs = _impl.coordinate_bfs


def trace_word(parent, via, idx: int) -> list[int]:
    """Letter indices along the BFS tree path from the root to ``idx``."""
    out = []
    while idx > 0:
        out.append(int(via[idx]))
        idx = int(parent[idx])
    out.reverse()
    return out
