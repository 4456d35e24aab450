"""Volumetric cone-adapted shearlet transform and denoising toolkit.

Build a filter bank with `ShearletConfig` + `build_system`, transform with
`decompose`/`reconstruct`, denoise with `denoise_volume` (streamed hard
thresholding), and evaluate with the `metrics` module. Synthetic ground
truth comes from the `phantom` generators; volumes travel through the
minimal container in `volio`.
"""

from .baselines import median_subtract, pixel_average_axial
from .denoise import (DenoiseParams, SubbandStats, denoise_volume,
                      denoise_volume_2d, subband_threshold)
from .errors import (BadMagicError, BoundsError, ConfigError,
                     FrameDegeneracyError, MetricUndefinedError, ShapeError,
                     ShearvolError, TruncatedPayloadError, UnwritablePathError,
                     ValidationError, VolumeIOError)
from .grid import VolumeGrid
from .metrics import AnnulusSpec, mse, octa_snr, psnr, ssim
from .phantom import (OctPhantomSpec, OctaPhantomSpec, VesselTube,
                      default_octa_spec, gen_oct_phantom, gen_octa_phantom)
from .system import (ShearletConfig, ShearletSystem, SubbandIndex,
                     build_system, build_system_2d, build_system_3d,
                     filter_count)
from .transform import (CoefficientStack, decompose, decompose_bscan_2d,
                        reconstruct, reconstruct_bscan_2d)
from .volio import (SlabSpec, enface_project, normalize, read_volume,
                    write_pgm, write_volume)

__version__ = "0.1.0"

__all__ = [
    "AnnulusSpec", "BadMagicError", "BoundsError", "CoefficientStack",
    "ConfigError", "DenoiseParams", "FrameDegeneracyError",
    "MetricUndefinedError", "OctPhantomSpec", "OctaPhantomSpec", "ShapeError",
    "ShearletConfig", "ShearletSystem", "ShearvolError", "SlabSpec",
    "SubbandIndex", "SubbandStats", "TruncatedPayloadError",
    "UnwritablePathError", "ValidationError", "VesselTube", "VolumeGrid",
    "VolumeIOError", "build_system", "build_system_2d", "build_system_3d",
    "decompose", "decompose_bscan_2d", "default_octa_spec", "denoise_volume",
    "denoise_volume_2d", "enface_project", "filter_count", "gen_oct_phantom",
    "gen_octa_phantom", "median_subtract", "mse", "normalize", "octa_snr",
    "pixel_average_axial", "psnr", "read_volume", "reconstruct",
    "reconstruct_bscan_2d", "ssim", "subband_threshold", "write_pgm",
    "write_volume",
]
