"""Exception taxonomy shared across the toolkit.

The CLI maps these onto exit codes: I/O failures exit 3, shape/configuration
failures exit 4 (bad flags exit 2 via argparse itself).
"""


class ShearvolError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(ShearvolError):
    """Invalid transform configuration (dims, scales, shear levels)."""


class FrameDegeneracyError(ShearvolError):
    """Dual-frame weight field fell below the frame lower bound."""


class ShapeError(ShearvolError):
    """Array dims do not match what the operation requires."""


class ValidationError(ShearvolError):
    """Input data violates a precondition (non-finite values, bad params)."""


class BoundsError(ShearvolError):
    """Index or slab selection out of range."""


class MetricUndefinedError(ShearvolError):
    """Metric has no value for this input (e.g. zero-variance region)."""


class VolumeIOError(ShearvolError):
    """Base class for volume file I/O failures."""


class BadMagicError(VolumeIOError):
    """File does not start with the expected container magic."""


class TruncatedPayloadError(VolumeIOError):
    """File payload is shorter than the header promises."""


class UnwritablePathError(VolumeIOError):
    """Destination path could not be written."""
