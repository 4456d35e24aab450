"""Comparison denoisers for OCTA bulk-motion suppression.

Median subtraction removes frame-correlated intensity offsets by
subtracting, within every B-frame, each depth row's median across the
fast-scan axis. Pixel averaging is a zero-phase moving mean along depth.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .grid import VolumeGrid


def median_subtract(volume: VolumeGrid) -> VolumeGrid:
    """Subtract per-row medians (over the fast axis) and clamp at zero.

    Rows are taken per B-frame and depth index, i.e. the median runs along
    axis 1 of (depth, fast, slow) data. Bulk-motion stripes are roughly
    constant along a row, so they cancel; isolated vessels survive because
    they barely move the median.
    """
    vol = volume if isinstance(volume, VolumeGrid) else VolumeGrid(np.asarray(volume))
    vals = vol.values
    med = np.median(vals, axis=1, keepdims=True)
    return vol.like(np.maximum(vals - med, 0.0))


def pixel_average_axial(volume: VolumeGrid, window: int = 6) -> VolumeGrid:
    """Centered moving mean along the depth axis.

    Even windows take one extra trailing sample; at the edges the window
    shrinks to whatever samples exist, so constants pass through unchanged
    and dims are preserved.
    """
    window = int(window)
    if window < 1:
        raise ValidationError(f"window must be >= 1, got {window}")
    vol = volume if isinstance(volume, VolumeGrid) else VolumeGrid(np.asarray(volume))
    if window == 1:
        return vol.like(vol.values.copy())
    vals = vol.values
    nz = vals.shape[0]
    left = (window - 1) // 2
    right = window - 1 - left
    csum = np.zeros((nz + 1,) + vals.shape[1:], dtype=np.float64)
    np.cumsum(vals, axis=0, out=csum[1:])
    z = np.arange(nz)
    lo = np.maximum(z - left, 0)
    hi = np.minimum(z + right, nz - 1)
    sums = csum[hi + 1] - csum[lo]
    counts = (hi - lo + 1).astype(np.float64)
    out = sums / counts.reshape((-1,) + (1,) * (vals.ndim - 1))
    return vol.like(out)
