"""Pick the compiled kernels when available, else the pure-Python ones."""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
if not os.environ.get("DEHNFLOER_PURE_PYTHON"):
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

f2_rank = _impl.f2_rank
enumerate_linear = _impl.enumerate_linear

__all__ = ["BACKEND", "f2_rank", "enumerate_linear"]
