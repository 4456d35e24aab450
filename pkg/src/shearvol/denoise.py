"""Per-subband hard thresholding of shearlet coefficients.

Each subband gets the threshold T = TL * sigma^2 / sigma_band, where
sigma_band is the population standard deviation of that subband's
coefficients; coefficients at or below T in magnitude are zeroed. The
volume pipeline is streamed: one frequency-domain pass per filter,
thresholding the subband and accumulating its filtered spectrum into a
running synthesis buffer, so the full coefficient stack never materializes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ShapeError, ValidationError
from .grid import VolumeGrid
from .system import ShearletConfig, ShearletSystem, SubbandIndex, build_system
from .util import irfftn, rfftn


@dataclass
class DenoiseParams:
    """Thresholding parameters.

    sigma: assumed noise standard deviation in intensity units (the data is
        expected on a 0..255 scale; see volio.normalize). Default 30.
    tl: threshold level; 2.5 suits structural OCT, 1.5 OCTA flow data.
    mode: "3d" for whole-volume filtering, "2d" for per-B-scan filtering.
    threshold_lowpass: None inherits the config flag (default True: the
        lowpass band is thresholded like any other subband).
    sigma_floor: subbands with std below this are zeroed outright (the
        T -> infinity limit).
    """

    sigma: float = 30.0
    tl: float = 2.5
    mode: str = "3d"
    threshold_lowpass: bool | None = None
    sigma_floor: float = 1e-9

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValidationError(f"sigma must be > 0, got {self.sigma}")
        if self.tl < 0:
            raise ValidationError(f"tl must be >= 0, got {self.tl}")
        if self.mode not in ("2d", "3d"):
            raise ValidationError(f"mode must be '2d' or '3d', got {self.mode!r}")
        if not self.sigma_floor > 0:
            raise ValidationError("sigma_floor must be > 0")


@dataclass
class SubbandStats:
    """Per-subband thresholding record."""

    std: float
    threshold: float
    kept_fraction: float
    index: SubbandIndex | None = None
    slice_index: int | None = None


def subband_threshold(coeff_volume: np.ndarray, params: DenoiseParams):
    """Hard-threshold one subband; returns (thresholded copy, SubbandStats).

    The subband std is the population standard deviation over all
    coefficients. A degenerate subband (std below params.sigma_floor) is
    zeroed entirely and recorded with std 0.
    """
    coeffs = np.asarray(coeff_volume, dtype=np.float64)
    if not np.all(np.isfinite(coeffs)):
        raise ValidationError("subband contains non-finite values")
    out = np.ascontiguousarray(coeffs).copy()
    stats = _threshold_inplace(out, params)
    return out, stats


def _threshold_inplace(coeffs: np.ndarray, params: DenoiseParams) -> SubbandStats:
    sd = float(np.std(coeffs))
    if sd < params.sigma_floor:
        coeffs[...] = 0.0
        return SubbandStats(std=0.0, threshold=math.inf, kept_fraction=0.0)
    threshold = params.tl * params.sigma ** 2 / sd
    kept = kernels.hard_threshold(coeffs.ravel(), threshold)
    return SubbandStats(std=sd, threshold=threshold, kept_fraction=kept / coeffs.size)


def apply_fixed_threshold(coeff_volume: np.ndarray, threshold: float) -> np.ndarray:
    """Re-apply an already-computed threshold (keep rule |c| > T)."""
    out = np.ascontiguousarray(np.asarray(coeff_volume, dtype=np.float64)).copy()
    kernels.hard_threshold(out.ravel(), float(threshold))
    return out


def _resolve_system(config_or_system, expect_ndim: int) -> ShearletSystem:
    if isinstance(config_or_system, ShearletSystem):
        system = config_or_system
    elif isinstance(config_or_system, ShearletConfig):
        system = build_system(config_or_system)
    else:
        raise ValidationError(
            "expected a ShearletConfig or a prebuilt ShearletSystem, "
            f"got {type(config_or_system).__name__}"
        )
    if system.config.ndim != expect_ndim:
        raise ShapeError(
            f"need a {expect_ndim}D system, got {system.config.ndim}D dims "
            f"{system.config.dims}"
        )
    return system


def _denoise_plane_or_volume(values, system, params, workers,
                             threshold_lowpass) -> tuple[np.ndarray, list[SubbandStats]]:
    """One streamed decompose -> threshold -> accumulate -> synthesize pass."""
    x = np.ascontiguousarray(values, dtype=np.float64)
    if x.shape != system.config.dims:
        raise ShapeError(
            f"volume dims {x.shape} do not match config dims {system.config.dims}"
        )
    if not np.all(np.isfinite(x)):
        raise ValidationError("input contains non-finite values")

    spectrum = rfftn(x, workers)
    acc = np.zeros_like(spectrum)
    buf = np.empty_like(spectrum)
    stats: list[SubbandStats] = []
    for idx, filt in system.filters:
        prepared = filt.prepared(half=True)
        kernels.apply_filter(spectrum, prepared, out=buf)
        coeffs = irfftn(buf, x.shape, workers)
        if idx.kind == "lowpass" and not threshold_lowpass:
            st = SubbandStats(std=float(np.std(coeffs)), threshold=0.0,
                              kept_fraction=1.0)
        else:
            st = _threshold_inplace(coeffs, params)
        st.index = idx
        stats.append(st)
        if st.kept_fraction > 0.0:
            kernels.accumulate(acc, rfftn(coeffs, workers), prepared)
    acc /= system.weight_half
    return irfftn(acc, x.shape, workers), stats


def denoise_volume(volume: VolumeGrid, config, params: DenoiseParams,
                   workers=None, clamp: bool = True):
    """Full-volume 3D shearlet hard-threshold denoising.

    `config` may be a ShearletConfig (the system is built on the fly) or a
    prebuilt ShearletSystem. Returns (denoised VolumeGrid, per-subband
    stats); the output carries the input's intensity range and, when
    `clamp` is set (the default), is clamped to it.
    """
    if params.mode != "3d":
        raise ValidationError(f"denoise_volume needs mode='3d', got {params.mode!r}")
    system = _resolve_system(config, 3)
    vol = volume if isinstance(volume, VolumeGrid) else VolumeGrid(np.asarray(volume))
    thr_low = params.threshold_lowpass
    if thr_low is None:
        thr_low = system.config.threshold_lowpass
    values, stats = _denoise_plane_or_volume(vol.values, system, params, workers, thr_low)
    if clamp:
        kernels.clamp(values.ravel(), *vol.intensity_range)
    return vol.like(values), stats


def denoise_volume_2d(volume: VolumeGrid, config2d, params: DenoiseParams,
                      workers=None, clamp: bool = True):
    """Per-B-scan 2D shearlet denoising of a volume.

    Applies the 2D pipeline independently to every slow-scan slice; the
    returned stats carry a slice_index per record.
    """
    if params.mode != "2d":
        raise ValidationError(f"denoise_volume_2d needs mode='2d', got {params.mode!r}")
    system = _resolve_system(config2d, 2)
    vol = volume if isinstance(volume, VolumeGrid) else VolumeGrid(np.asarray(volume))
    if vol.values.ndim != 3:
        raise ShapeError(f"expected a 3D volume, got {vol.values.ndim}D")
    if vol.values.shape[:2] != system.config.dims:
        raise ShapeError(
            f"B-scan plane {vol.values.shape[:2]} does not match 2D config dims "
            f"{system.config.dims}"
        )
    thr_low = params.threshold_lowpass
    if thr_low is None:
        thr_low = system.config.threshold_lowpass
    out = np.empty_like(vol.values, dtype=np.float64)
    stats: list[SubbandStats] = []
    for y in range(vol.values.shape[2]):
        plane, plane_stats = _denoise_plane_or_volume(
            vol.values[:, :, y], system, params, workers, thr_low)
        out[:, :, y] = plane
        for st in plane_stats:
            st.slice_index = y
        stats.extend(plane_stats)
    if clamp:
        kernels.clamp(out.ravel(), *vol.intensity_range)
    return vol.like(out), stats


def format_stats_table(stats: list[SubbandStats]) -> str:
    """Aligned text table of per-subband thresholding stats."""
    has_slice = any(st.slice_index is not None for st in stats)
    header = ["subband", "std", "threshold", "kept"]
    if has_slice:
        header = ["slice"] + header
    rows = []
    for st in stats:
        label = st.index.label() if st.index is not None else "-"
        row = [label, f"{st.std:.6g}",
               "inf" if math.isinf(st.threshold) else f"{st.threshold:.6g}",
               f"{st.kept_fraction:.6f}"]
        if has_slice:
            row = [str(st.slice_index if st.slice_index is not None else "-")] + row
        rows.append(row)
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i])
              for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    return "\n".join(lines)
