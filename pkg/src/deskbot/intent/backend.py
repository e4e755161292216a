"""Kernel backend selection.

Prefers the compiled extension when it was built; falls back to the numpy
kernels otherwise. Set DESKBOT_PURE_PYTHON=1 to force the fallback (used by
the benchmark to compare both paths).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("DESKBOT_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "compiled"

forward_kernel = _impl.forward_kernel
backward_kernel = _impl.backward_kernel
nesterov_update = _impl.nesterov_update
