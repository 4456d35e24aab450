"""Volumetric data container with OCT-style axis semantics.

Axis order is (depth, fast-scan, slow-scan): axis 0 walks down an A-line,
axis 1 walks across a B-scan, axis 2 steps between B-scans.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

DEFAULT_INTENSITY_RANGE = (0.0, 255.0)


@dataclass
class VolumeGrid:
    """3D scalar field with voxel pitch and a declared intensity range.

    Parameters
    ----------
    values : np.ndarray
        Real scalar per voxel, shape (nz, nx, ny). 2D arrays are accepted
        for single-B-scan work.
    pitch : tuple or None
        Physical spacing in mm per axis; None (or 0 entries) means unknown.
    intensity_range : (lo, hi)
        Declared data range; denoising clamps its output to this range.
    """

    values: np.ndarray
    pitch: tuple[float, ...] | None = None
    intensity_range: tuple[float, float] = field(default=DEFAULT_INTENSITY_RANGE)

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if not np.issubdtype(self.values.dtype, np.floating):
            self.values = self.values.astype(np.float64)
        if self.values.ndim not in (2, 3):
            raise ValidationError(f"volume must be 2D or 3D, got {self.values.ndim}D")
        if any(n < 1 for n in self.values.shape):
            raise ValidationError(f"volume dims must be >= 1, got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("volume contains non-finite values")
        if self.pitch is not None:
            self.pitch = tuple(float(p) for p in self.pitch)
            if len(self.pitch) != self.values.ndim:
                raise ValidationError("pitch must have one entry per axis")
        lo, hi = self.intensity_range
        self.intensity_range = (float(lo), float(hi))
        if not lo < hi:
            raise ValidationError("intensity_range must satisfy lo < hi")

    @property
    def dims(self) -> tuple[int, ...]:
        return self.values.shape

    def like(self, values: np.ndarray) -> "VolumeGrid":
        """New grid with the same metadata and fresh values."""
        return VolumeGrid(values, pitch=self.pitch, intensity_range=self.intensity_range)


def as_array(data) -> np.ndarray:
    """Accept a VolumeGrid or a bare ndarray and return the ndarray."""
    if isinstance(data, VolumeGrid):
        return data.values
    return np.asarray(data)
