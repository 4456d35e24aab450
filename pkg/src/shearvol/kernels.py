"""Backend selection for the elementwise hot loops.

At import time the compiled Cython extension is preferred; if it is missing
(pure-Python install) the NumPy fallback takes over. Set SHEARVOL_KERNELS to
"python" or "cython" to force one side, e.g. for the backend benchmark.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

KERNELS_ENV = "SHEARVOL_KERNELS"

_forced = os.environ.get(KERNELS_ENV, "").strip().lower()
if _forced == "python":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _forced == "cython":
            raise ImportError(
                "SHEARVOL_KERNELS=cython but the compiled extension is not "
                "available; reinstall with the Cython build enabled"
            ) from None
        _impl = _kernels_py


def backend() -> str:
    """Name of the active backend: 'cython' or 'python'."""
    return _impl.BACKEND


def set_backend(name: str) -> None:
    """Switch backend at runtime (used by tests and the benchmark)."""
    global _impl
    name = name.strip().lower()
    if name == "python":
        _impl = _kernels_py
    elif name == "cython":
        from . import _kernels  # noqa: raises ImportError when unavailable

        _impl = _kernels
    else:
        raise ValueError(f"unknown kernel backend {name!r}")


def apply_filter(spec, prepared, out=None):
    """out = spec * filter, with the filter in prepared (mode, a, b) form."""
    mode, a, b = prepared
    if out is None:
        out = np.empty_like(spec)
    return _impl.apply_filter(spec, a, b, mode, out)


def accumulate(acc, spec, prepared):
    """acc += spec * filter."""
    mode, a, b = prepared
    return _impl.accumulate(acc, spec, a, b, mode)


def hard_threshold(x: np.ndarray, threshold: float) -> int:
    """Zero |x| <= threshold in place (flat float64 array); return kept count."""
    return int(_impl.hard_threshold(x, float(threshold)))


def clamp(x: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Clamp a flat float64 array in place."""
    return _impl.clamp(x, float(lo), float(hi))
