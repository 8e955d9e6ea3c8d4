"""Hot-kernel backend selection.

The compiled extension (``_core``, Cython + OpenMP) is preferred; the NumPy
fallback (``pyback``) is used when the extension is missing or when
GRIDCAST_PURE_PYTHON=1 is set. Both expose the same functions; see
benchmarks/bench_kernels.py for a speed comparison.
"""

from __future__ import annotations

import os

from . import pyback

BACKEND = "python"
_impl = pyback

if not os.environ.get("GRIDCAST_PURE_PYTHON"):
    try:
        from . import _core  # type: ignore[attr-defined]

        _impl = _core
        BACKEND = "cython"
    except ImportError:
        pass

conv2d_forward = _impl.conv2d_forward
conv2d_grad_input = _impl.conv2d_grad_input
conv2d_grad_weights = _impl.conv2d_grad_weights
raycast = _impl.raycast
trace_rays = _impl.trace_rays
correlate2d_same = _impl.correlate2d_same


def get_backend() -> str:
    return BACKEND


def backends() -> dict[str, object]:
    """All importable backends, keyed by name (for tests and benchmarks)."""
    out: dict[str, object] = {"python": pyback}
    try:
        from . import _core  # type: ignore[attr-defined]

        out["cython"] = _core
    except ImportError:
        pass
    return out
