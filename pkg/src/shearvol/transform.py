"""FFT-based forward shearlet decomposition and exact dual-frame synthesis.

Undecimated, circular-boundary transforms: every subband has the input's
shape, subband_i = ifft(fft(f) * conj(psi_i)), and synthesis divides the
accumulated filtered spectrum by the frame weight field. Input and filters
are real with even-symmetric spectra, so the real-FFT half spectrum carries
the whole computation and subbands come out exactly real.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BoundsError, ShapeError, ValidationError
from .grid import VolumeGrid, as_array
from .system import ShearletSystem, SubbandIndex
from .util import irfftn, rfftn


@dataclass
class CoefficientStack:
    """Ordered per-subband coefficient volumes from one decomposition.

    Subband order matches the generating system's filter order, and each
    volume has the input dims (the transform is undecimated). Grid metadata
    rides along so reconstruction can restore it.
    """

    subbands: list[tuple[SubbandIndex, np.ndarray]]
    system_id: str
    pitch: tuple[float, ...] | None = None
    intensity_range: tuple[float, float] = (0.0, 255.0)

    def volumes(self) -> list[np.ndarray]:
        return [vol for _, vol in self.subbands]


def _check_input(values: np.ndarray, system: ShearletSystem) -> np.ndarray:
    if values.shape != system.config.dims:
        raise ShapeError(
            f"volume dims {values.shape} do not match system dims {system.config.dims}"
        )
    if not np.all(np.isfinite(values)):
        raise ValidationError("input contains non-finite values")
    return np.ascontiguousarray(values, dtype=np.float64)


def _decompose_array(values: np.ndarray, system: ShearletSystem, workers=None):
    x = _check_input(values, system)
    spectrum = rfftn(x, workers)
    out = []
    buf = np.empty_like(spectrum)
    for idx, filt in system.filters:
        kernels.apply_filter(spectrum, filt.prepared(half=True), out=buf)
        out.append((idx, irfftn(buf, x.shape, workers)))
    return out


def _synthesize_array(stack: CoefficientStack, system: ShearletSystem,
                      weighted: bool = True, workers=None) -> np.ndarray:
    if stack.system_id != system.system_id:
        raise ShapeError(
            f"stack was produced by {stack.system_id!r}, not {system.system_id!r}"
        )
    if len(stack.subbands) != len(system.filters):
        raise ShapeError(
            f"stack has {len(stack.subbands)} subbands, system expects "
            f"{len(system.filters)}"
        )
    dims = system.config.dims
    acc = None
    for (idx, vol), (ref_idx, filt) in zip(stack.subbands, system.filters):
        if idx != ref_idx:
            raise ShapeError(f"subband order mismatch at {idx.label()}")
        if vol.shape != dims:
            raise ShapeError(
                f"subband {idx.label()} has shape {vol.shape}, expected {dims}"
            )
        spec = rfftn(np.asarray(vol, dtype=np.float64), workers)
        if acc is None:
            acc = np.zeros_like(spec)
        kernels.accumulate(acc, spec, filt.prepared(half=True))
    if weighted:
        acc /= system.weight_half
    return irfftn(acc, dims, workers)


def decompose(volume: VolumeGrid, system: ShearletSystem, workers=None) -> CoefficientStack:
    """Forward transform: one real coefficient volume per filter.

    Linear in the input and covariant under circular shifts. Peak memory is
    one volume per filter plus a spectrum buffer; use the streamed denoising
    pipeline when the full stack is not needed. Works for 3D volumes and,
    with a 2D system, for single B-scan planes.
    """
    vol = volume if isinstance(volume, VolumeGrid) else VolumeGrid(np.asarray(volume))
    return CoefficientStack(
        subbands=_decompose_array(vol.values, system, workers),
        system_id=system.system_id,
        pitch=vol.pitch,
        intensity_range=vol.intensity_range,
    )


def reconstruct(coeffs: CoefficientStack, system: ShearletSystem, workers=None) -> VolumeGrid:
    """Dual-frame synthesis; inverts `decompose` for untouched coefficients."""
    values = _synthesize_array(coeffs, system, weighted=True, workers=workers)
    return VolumeGrid(values, pitch=coeffs.pitch, intensity_range=coeffs.intensity_range)


def synthesize_unweighted(coeffs: CoefficientStack, system: ShearletSystem,
                          workers=None) -> np.ndarray:
    """Adjoint of `decompose` (synthesis without the weight division)."""
    return _synthesize_array(coeffs, system, weighted=False, workers=workers)


def _slice_2d(volume: VolumeGrid, system2d: ShearletSystem, slice_index: int) -> np.ndarray:
    vals = as_array(volume)
    if vals.ndim != 3:
        raise ShapeError(f"expected a 3D volume, got {vals.ndim}D")
    if not 0 <= slice_index < vals.shape[2]:
        raise BoundsError(
            f"slice index {slice_index} out of range for {vals.shape[2]} B-scans"
        )
    plane = vals[:, :, slice_index]
    if plane.shape != system2d.config.dims:
        raise ShapeError(
            f"B-scan plane {plane.shape} does not match 2D system dims "
            f"{system2d.config.dims}"
        )
    return plane


def decompose_bscan_2d(volume: VolumeGrid, system2d: ShearletSystem,
                       slice_index: int, workers=None) -> CoefficientStack:
    """2D decomposition of one slow-scan slice (a single B-scan)."""
    vol = volume if isinstance(volume, VolumeGrid) else VolumeGrid(np.asarray(volume))
    plane = _slice_2d(vol, system2d, slice_index)
    return CoefficientStack(
        subbands=_decompose_array(plane, system2d, workers),
        system_id=system2d.system_id,
        pitch=None if vol.pitch is None else vol.pitch[:2],
        intensity_range=vol.intensity_range,
    )


def reconstruct_bscan_2d(coeffs: CoefficientStack, system2d: ShearletSystem,
                         workers=None) -> np.ndarray:
    """2D dual-frame synthesis of one B-scan; returns the plane array."""
    return _synthesize_array(coeffs, system2d, weighted=True, workers=workers)
