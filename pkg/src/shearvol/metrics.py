"""Quantitative evaluation: MSE, PSNR, SSIM, and the OCTA en-face SNR.

Volumes are scored per B-scan and averaged for SSIM; MSE/PSNR pool over all
voxels. The OCTA SNR compares the parafoveal annulus against the foveal
avascular zone of an en-face image:

    SNR = (mean(annulus) - mean(FAZ)) / std(FAZ)

with the region geometry given in millimetres and converted through the
pixel pitch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter

from .errors import BoundsError, MetricUndefinedError, ShapeError, ValidationError
from .grid import as_array

# Default pitch from a 3x3 mm field of view sampled 245 times per axis.
DEFAULT_PITCH_MM = 3.0 / 245.0

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def _pair(a, gt):
    a = as_array(a).astype(np.float64, copy=False)
    gt = as_array(gt).astype(np.float64, copy=False)
    if a.shape != gt.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {gt.shape}")
    return a, gt


def mse(a, gt) -> float:
    """Mean squared difference over all samples."""
    a, gt = _pair(a, gt)
    return float(np.mean((a - gt) ** 2))


def psnr(a, gt, data_range: float = 255.0) -> float:
    """Peak signal-to-noise ratio in dB; +inf marks identical inputs."""
    if not data_range > 0:
        raise ValidationError(f"data_range must be > 0, got {data_range}")
    err = mse(a, gt)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(data_range ** 2 / err)


def _ssim_2d(a, gt, data_range) -> float:
    c1 = (SSIM_K1 * data_range) ** 2
    c2 = (SSIM_K2 * data_range) ** 2
    # truncate chosen so the Gaussian kernel spans exactly SSIM_WINDOW taps
    trunc = (SSIM_WINDOW // 2) / SSIM_SIGMA

    def smooth(img):
        return gaussian_filter(img, SSIM_SIGMA, mode="reflect", truncate=trunc)

    mu_a = smooth(a)
    mu_g = smooth(gt)
    var_a = smooth(a * a) - mu_a * mu_a
    var_g = smooth(gt * gt) - mu_g * mu_g
    cov = smooth(a * gt) - mu_a * mu_g
    num = (2.0 * mu_a * mu_g + c1) * (2.0 * cov + c2)
    den = (mu_a ** 2 + mu_g ** 2 + c1) * (var_a + var_g + c2)
    return float(np.mean(num / den))


def ssim(a, gt, data_range: float = 255.0) -> float:
    """Structural similarity with the standard 11x11 Gaussian window.

    2D inputs are scored directly; 3D volumes are scored per B-scan
    (slow-axis slice) and averaged.
    """
    if not data_range > 0:
        raise ValidationError(f"data_range must be > 0, got {data_range}")
    a, gt = _pair(a, gt)
    if a.ndim == 2:
        if min(a.shape) < SSIM_WINDOW:
            raise ShapeError(
                f"image {a.shape} smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} window"
            )
        return _ssim_2d(a, gt, data_range)
    if a.ndim == 3:
        if min(a.shape[:2]) < SSIM_WINDOW:
            raise ShapeError(
                f"B-scan plane {a.shape[:2]} smaller than the "
                f"{SSIM_WINDOW}x{SSIM_WINDOW} window"
            )
        return float(np.mean([
            _ssim_2d(a[:, :, y], gt[:, :, y], data_range) for y in range(a.shape[2])
        ]))
    raise ShapeError(f"ssim expects 2D or 3D input, got {a.ndim}D")


@dataclass(frozen=True)
class AnnulusSpec:
    """Parafovea/FAZ geometry for the en-face SNR.

    center: (x, y) in pixels; None means the image center.
    Diameters are physical (mm) and converted through pixel_pitch_mm.
    """

    center: tuple[float, float] | None = None
    inner_diameter_mm: float = 0.6
    outer_diameter_mm: float = 2.5
    pixel_pitch_mm: float = DEFAULT_PITCH_MM

    def __post_init__(self):
        if not 0 < self.inner_diameter_mm < self.outer_diameter_mm:
            raise ValidationError(
                "need 0 < inner diameter < outer diameter, got "
                f"{self.inner_diameter_mm} / {self.outer_diameter_mm}"
            )
        if not self.pixel_pitch_mm > 0:
            raise ValidationError(f"pixel pitch must be > 0, got {self.pixel_pitch_mm}")

    def masks(self, shape: tuple[int, int]):
        """(FAZ disc mask, annulus mask) for an image of the given shape."""
        nx, ny = shape
        cx, cy = self.center if self.center is not None else ((nx - 1) / 2.0, (ny - 1) / 2.0)
        r_inner = 0.5 * self.inner_diameter_mm / self.pixel_pitch_mm
        r_outer = 0.5 * self.outer_diameter_mm / self.pixel_pitch_mm
        if cx - r_outer < -0.5 or cx + r_outer > nx - 0.5 \
                or cy - r_outer < -0.5 or cy + r_outer > ny - 0.5:
            raise BoundsError(
                f"annulus of radius {r_outer:.1f} px at ({cx:.1f}, {cy:.1f}) "
                f"does not fit a {nx}x{ny} image"
            )
        dx = np.arange(nx)[:, None] - cx
        dy = np.arange(ny)[None, :] - cy
        dist = np.hypot(dx, dy)
        faz = dist <= r_inner
        annulus = (dist > r_inner) & (dist <= r_outer)
        if int(annulus.sum()) < 10:
            raise ValidationError(
                f"annulus contains only {int(annulus.sum())} pixels (need >= 10)"
            )
        if int(faz.sum()) < 2:
            raise ValidationError("FAZ disc covers fewer than 2 pixels")
        return faz, annulus


def octa_snr(enface, roi: AnnulusSpec) -> float:
    """Flow SNR of an en-face image per the parafovea-vs-FAZ definition."""
    img = as_array(enface).astype(np.float64, copy=False)
    if img.ndim != 2:
        raise ShapeError(f"octa_snr expects a 2D en-face image, got {img.ndim}D")
    faz_mask, ann_mask = roi.masks(img.shape)
    faz = img[faz_mask]
    annulus = img[ann_mask]
    faz_std = float(np.std(faz))
    if faz_std < 1e-12:
        raise MetricUndefinedError("FAZ region has (near-)zero variance")
    return float((annulus.mean() - faz.mean()) / faz_std)


def format_records(records: list[tuple[str, float, dict]]) -> str:
    """Machine-readable lines: one metric per line as `name value k=v ...`."""
    lines = []
    for name, value, params in records:
        tail = " ".join(f"{k}={v}" for k, v in params.items())
        val = "inf" if math.isinf(value) else f"{value:.9g}"
        lines.append(f"{name} {val} {tail}".rstrip())
    return "\n".join(lines)


def format_table(records: list[tuple[str, float, dict]]) -> str:
    """Aligned text table of metric records."""
    rows = []
    for name, value, params in records:
        val = "identical" if math.isinf(value) else f"{value:.6f}"
        tail = ", ".join(f"{k}={v}" for k, v in params.items())
        rows.append((name, val, tail))
    w0 = max((len(r[0]) for r in rows), default=6)
    w1 = max((len(r[1]) for r in rows), default=5)
    lines = [f"{'metric'.ljust(w0)}  {'value'.ljust(w1)}  parameters"]
    for r in rows:
        lines.append(f"{r[0].ljust(w0)}  {r[1].ljust(w1)}  {r[2]}")
    return "\n".join(lines)
