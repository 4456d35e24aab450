"""Volume file I/O, normalization, and en-face projection.

The container is deliberately minimal: a fixed little-endian header followed
by the raw C-order payload.

    bytes 0..5   magic "SHVOL1"
    byte  6      sample type: 0 = float32, 1 = uint8
    byte  7      number of dims (2 or 3)
    then         ndim * uint32   dims
    then         ndim * float32  pitch in mm per axis (0 = unknown)
    then         2 * float32     intensity range (lo, hi)
    then         payload, product(dims) samples, little-endian, C order

uint8 payloads are promoted to float32 on read. 2D images (e.g. depth maps
for slab projection) use the same container with ndim = 2.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import (BadMagicError, BoundsError, TruncatedPayloadError,
                     UnwritablePathError, ValidationError, VolumeIOError)
from .grid import VolumeGrid

MAGIC = b"SHVOL1"
_DTYPES = {0: np.dtype("<f4"), 1: np.dtype("u1")}
_DTYPE_CODES = {"f32": 0, "u8": 1}


@dataclass(frozen=True)
class VolumeHeader:
    """Parsed container header."""

    dtype_code: int
    dims: tuple[int, ...]
    pitch: tuple[float, ...]
    intensity_range: tuple[float, float]

    @property
    def sample_dtype(self) -> np.dtype:
        return _DTYPES[self.dtype_code]


def _read_header(fh, path) -> VolumeHeader:
    head = fh.read(8)
    if len(head) < 8 or head[:6] != MAGIC:
        raise BadMagicError(f"{path}: not a {MAGIC.decode()} container")
    dtype_code, ndim = head[6], head[7]
    if dtype_code not in _DTYPES:
        raise VolumeIOError(f"{path}: unknown sample type code {dtype_code}")
    if ndim not in (2, 3):
        raise VolumeIOError(f"{path}: unsupported ndim {ndim}")
    meta = fh.read(4 * ndim + 4 * ndim + 8)
    if len(meta) < 4 * ndim + 4 * ndim + 8:
        raise TruncatedPayloadError(f"{path}: header cut short")
    dims = struct.unpack(f"<{ndim}I", meta[: 4 * ndim])
    pitch = struct.unpack(f"<{ndim}f", meta[4 * ndim: 8 * ndim])
    lo, hi = struct.unpack("<2f", meta[8 * ndim:])
    return VolumeHeader(dtype_code, dims, pitch, (lo, hi))


def read_volume(path) -> VolumeGrid:
    """Read a container file into a VolumeGrid (f32 values; u8 promoted)."""
    try:
        fh = open(path, "rb")
    except OSError as exc:
        raise VolumeIOError(f"{path}: {exc}") from exc
    with fh:
        header = _read_header(fh, path)
        count = int(np.prod(header.dims))
        payload = fh.read(count * header.sample_dtype.itemsize + 1)
    if len(payload) < count * header.sample_dtype.itemsize:
        raise TruncatedPayloadError(
            f"{path}: payload has {len(payload)} bytes, expected "
            f"{count * header.sample_dtype.itemsize}"
        )
    if len(payload) > count * header.sample_dtype.itemsize:
        raise VolumeIOError(f"{path}: trailing bytes after payload")
    values = np.frombuffer(payload, dtype=header.sample_dtype).reshape(header.dims)
    values = values.astype(np.float32)
    pitch = header.pitch if any(p > 0 for p in header.pitch) else None
    lo, hi = header.intensity_range
    if not lo < hi:
        lo, hi = 0.0, 255.0
    return VolumeGrid(values, pitch=pitch, intensity_range=(lo, hi))


def read_image(path) -> np.ndarray:
    """Read a 2D container file (e.g. a depth map); returns the bare array."""
    grid = read_volume(path)
    if grid.values.ndim != 2:
        raise VolumeIOError(f"{path}: expected a 2D image, found {grid.values.ndim}D")
    return grid.values


def write_volume(path, volume, dtype: str = "f32") -> None:
    """Write a VolumeGrid (or 2D/3D array) as f32 (lossless) or u8."""
    vol = volume if isinstance(volume, VolumeGrid) else VolumeGrid(np.asarray(volume))
    if dtype not in _DTYPE_CODES:
        raise ValidationError(f"dtype must be 'f32' or 'u8', got {dtype!r}")
    code = _DTYPE_CODES[dtype]
    values = vol.values
    if code == 0:
        payload = np.ascontiguousarray(values, dtype="<f4").tobytes()
    else:
        payload = np.ascontiguousarray(
            np.clip(np.rint(values), 0, 255), dtype="u1").tobytes()
    ndim = values.ndim
    pitch = vol.pitch if vol.pitch is not None else (0.0,) * ndim
    header = MAGIC + bytes([code, ndim])
    header += struct.pack(f"<{ndim}I", *values.shape)
    header += struct.pack(f"<{ndim}f", *pitch)
    header += struct.pack("<2f", *vol.intensity_range)
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(payload)
    except OSError as exc:
        raise UnwritablePathError(f"{path}: {exc}") from exc


def normalize(volume, target_range: tuple[float, float] = (0.0, 255.0)) -> VolumeGrid:
    """Affinely map [data min, data max] onto the target range.

    Constant volumes map to the range midpoint. The returned grid declares
    the target range as its intensity range.
    """
    vol = volume if isinstance(volume, VolumeGrid) else VolumeGrid(np.asarray(volume))
    lo, hi = float(target_range[0]), float(target_range[1])
    if not lo < hi:
        raise ValidationError(f"target range must satisfy lo < hi, got {target_range}")
    vmin = float(vol.values.min())
    vmax = float(vol.values.max())
    if vmax > vmin:
        values = (vol.values.astype(np.float64) - vmin) * ((hi - lo) / (vmax - vmin)) + lo
    else:
        values = np.full(vol.values.shape, 0.5 * (lo + hi))
    return VolumeGrid(values, pitch=vol.pitch, intensity_range=(lo, hi))


@dataclass
class SlabSpec:
    """Depth slab for en-face projection.

    Either flat bounds [z0, z1) or per-column surfaces (top, bottom), both
    inclusive integer depth maps of shape (nx, ny) with top <= bottom.
    """

    mode: str = "max"  # "max" | "mean"
    z0: int | None = None
    z1: int | None = None
    top: np.ndarray | None = None
    bottom: np.ndarray | None = None

    def __post_init__(self):
        if self.mode not in ("max", "mean"):
            raise ValidationError(f"slab mode must be 'max' or 'mean', got {self.mode!r}")
        flat = self.z0 is not None or self.z1 is not None
        mapped = self.top is not None or self.bottom is not None
        if flat == mapped:
            raise ValidationError("slab needs either z0/z1 or top/bottom maps")
        if flat and (self.z0 is None or self.z1 is None):
            raise ValidationError("flat slab needs both z0 and z1")
        if mapped and (self.top is None or self.bottom is None):
            raise ValidationError("mapped slab needs both top and bottom maps")


def enface_project(volume, slab: SlabSpec) -> np.ndarray:
    """Project the volume along depth within the slab; returns an (nx, ny) image."""
    vol = volume if isinstance(volume, VolumeGrid) else VolumeGrid(np.asarray(volume))
    vals = vol.values
    if vals.ndim != 3:
        raise ValidationError(f"projection needs a 3D volume, got {vals.ndim}D")
    nz, nx, ny = vals.shape
    if slab.z0 is not None:
        z0, z1 = int(slab.z0), int(slab.z1)
        if not 0 <= z0 < z1 <= nz:
            raise BoundsError(
                f"flat slab [{z0}, {z1}) is empty or outside depth range [0, {nz})"
            )
        block = vals[z0:z1]
        return block.max(axis=0) if slab.mode == "max" else block.mean(axis=0)

    top = np.rint(np.asarray(slab.top)).astype(np.int64)
    bottom = np.rint(np.asarray(slab.bottom)).astype(np.int64)
    if top.shape != (nx, ny) or bottom.shape != (nx, ny):
        raise BoundsError(
            f"depth maps must be shaped {(nx, ny)}, got {top.shape} and {bottom.shape}"
        )
    if top.min() < 0 or bottom.max() >= nz:
        raise BoundsError(f"depth maps exceed the depth range [0, {nz})")
    if np.any(top > bottom):
        raise BoundsError("depth maps define an empty slab (top > bottom somewhere)")
    z = np.arange(nz)[:, None, None]
    inside = (z >= top[None]) & (z <= bottom[None])
    if slab.mode == "max":
        return np.where(inside, vals, -np.inf).max(axis=0)
    counts = inside.sum(axis=0)
    return (vals * inside).sum(axis=0) / counts


def write_pgm(path, image) -> None:
    """Write a 2D image as binary 8-bit PGM (values clipped to [0, 255])."""
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValidationError(f"PGM export needs a 2D image, got {img.ndim}D")
    data = np.clip(np.rint(img), 0, 255).astype("u1")
    try:
        with open(path, "wb") as fh:
            fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode())
            fh.write(data.tobytes())
    except OSError as exc:
        raise UnwritablePathError(f"{path}: {exc}") from exc
