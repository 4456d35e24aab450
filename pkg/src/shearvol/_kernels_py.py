"""Pure-NumPy implementations of the elementwise hot loops.

Mirrors the Cython extension in `_kernels.pyx`; the two backends must
produce bitwise-identical results (same per-element operation order), which
the test suite checks. Filter factors arrive as compact arrays plus a mode
code describing how they broadcast onto the spectrum grid:

    mode 0: out[i,j,k] = spec[i,j,k] * a[i,j] * b[i,k]   (axis-0 dominant)
    mode 1: out[i,j,k] = spec[i,j,k] * a[i,j] * b[j,k]   (axis-1 dominant)
    mode 2: out[i,j,k] = spec[i,j,k] * a[i,k] * b[j,k]   (axis-2 dominant)
    mode 3: out[i,j,k] = spec[i,j,k] * a[i,j] * b[k]     (separable lowpass)
    mode 4: out[i,j]   = spec[i,j]   * a[i,j]            (dense 2D filter)
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _views(spec, a, b, mode):
    if mode == 0:
        return a[:, :, None], b[:, None, :]
    if mode == 1:
        return a[:, :, None], b[None, :, :]
    if mode == 2:
        return a[:, None, :], b[None, :, :]
    if mode == 3:
        return a[:, :, None], b[None, None, :]
    if mode == 4:
        return a, None
    raise ValueError(f"unknown filter mode {mode}")


def apply_filter(spec, a, b, mode, out):
    """out = spec * broadcast(a[, b]); returns out."""
    av, bv = _views(spec, a, b, mode)
    np.multiply(spec, av, out=out)
    if bv is not None:
        out *= bv
    return out


def accumulate(acc, spec, a, b, mode):
    """acc += spec * broadcast(a[, b]) without materializing the full filter."""
    av, bv = _views(spec, a, b, mode)
    term = spec * av
    if bv is not None:
        term *= bv
    acc += term
    return acc


def hard_threshold(x, threshold):
    """Zero entries with |x| <= threshold in place; return the kept count."""
    mask = np.abs(x) > threshold
    kept = int(np.count_nonzero(mask))
    x[~mask] = 0.0
    return kept


def clamp(x, lo, hi):
    """Clamp in place to [lo, hi]."""
    np.clip(x, lo, hi, out=x)
    return x
