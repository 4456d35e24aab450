"""Seeded synthetic OCT/OCTA phantoms with known clean ground truth.

The clean volumes depend only on the spec (no randomness), so clean parts
are identical across seeds; all noise comes from numpy's PCG64 generator
seeded explicitly (np.random.default_rng(seed)).

Noise draw order is part of the contract so tests can re-derive it:

OCT phantom (gen_oct_phantom):
    1. speckle = rng.gamma(shape=looks, scale=1/looks, size=dims)
    2. if noise_std > 0: additive = rng.normal(0, noise_std, size=dims)
    noisy = clean * speckle + additive, clamped to [0, 255].

OCTA phantom (gen_octa_phantom):
    1. frame_draws = rng.random(ny); frame y is corrupted iff frame_draws[y] < bulk_p
    2. per corrupted frame, ascending y:
           base  = rng.uniform(bulk_lo, bulk_hi)
           jitter = rng.uniform(0.25, 1.75, size=nz)
       and base * jitter[z] is added to every voxel of row z of that frame
    3. if noise_std > 0: additive = rng.normal(0, noise_std, size=dims)
    clamped to [0, 255].

Generated volumes declare a 6x6 mm en-face field of view (pitch 6/nx and
6/ny mm laterally, 3 um axially), matching common macular scan protocols.

Specs serialize to `key = value` text; see parse_spec_text for the keys.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .grid import VolumeGrid

INTENSITY_RANGE = (0.0, 255.0)

# 6x6 mm en-face field of view, 3 um axial sampling
ENFACE_FOV_MM = 6.0
AXIAL_PITCH_MM = 0.003


def _phantom_pitch(dims) -> tuple[float, float, float]:
    _, nx, ny = dims
    return (AXIAL_PITCH_MM, ENFACE_FOV_MM / nx, ENFACE_FOV_MM / ny)


def _check_dims(dims) -> tuple[int, int, int]:
    dims = tuple(int(n) for n in dims)
    if len(dims) != 3 or any(n < 1 for n in dims):
        raise ValidationError(f"dims must be three positive integers, got {dims}")
    return dims


@dataclass(frozen=True)
class OctPhantomSpec:
    """Layered structural-OCT scene with multiplicative speckle.

    Layer boundaries are depth fractions in (0,1), strictly increasing, with
    one reflectivity per region between them (so len(reflectivities) ==
    len(boundaries) + 1). Boundaries undulate sinusoidally with the given
    amplitude/wavelength in voxels. Speckle is unit-mean gamma with `looks`
    as the shape parameter; `noise_std` adds Gaussian read noise.
    """

    dims: tuple[int, int, int]
    boundaries: tuple[float, ...] = (0.2, 0.45, 0.7)
    reflectivities: tuple[float, ...] = (15.0, 120.0, 60.0, 150.0)
    wave_amplitude: float = 3.0
    wave_length: float = 16.0
    looks: int = 4
    noise_std: float = 5.0

    def __post_init__(self):
        object.__setattr__(self, "dims", _check_dims(self.dims))
        object.__setattr__(self, "boundaries", tuple(float(b) for b in self.boundaries))
        object.__setattr__(self, "reflectivities",
                           tuple(float(r) for r in self.reflectivities))
        if not self.boundaries:
            raise ValidationError("need at least one layer boundary")
        if any(not 0.0 < b < 1.0 for b in self.boundaries):
            raise ValidationError(f"boundaries must lie in (0, 1): {self.boundaries}")
        if any(b2 <= b1 for b1, b2 in zip(self.boundaries, self.boundaries[1:])):
            raise ValidationError(f"boundaries must be strictly increasing: {self.boundaries}")
        if len(self.reflectivities) != len(self.boundaries) + 1:
            raise ValidationError(
                f"{len(self.boundaries)} boundaries need "
                f"{len(self.boundaries) + 1} reflectivities"
            )
        if any(not 0.0 <= r <= 255.0 for r in self.reflectivities):
            raise ValidationError("reflectivities must lie in [0, 255]")
        if self.looks < 1:
            raise ValidationError(f"looks must be >= 1, got {self.looks}")
        if self.wave_amplitude < 0 or self.wave_length <= 0:
            raise ValidationError("waviness amplitude must be >= 0, wavelength > 0")
        if self.noise_std < 0:
            raise ValidationError("noise_std must be >= 0")


@dataclass(frozen=True)
class VesselTube:
    """One vessel: a 3D polyline centerline with a radius and intensity."""

    path: tuple[tuple[float, float, float], ...]  # (z, x, y) points
    radius: float
    intensity: float

    def __post_init__(self):
        object.__setattr__(
            self, "path",
            tuple(tuple(float(c) for c in p) for p in self.path))
        if len(self.path) < 2:
            raise ValidationError("a vessel path needs at least two points")
        if self.radius < 1.0:
            raise ValidationError(f"vessel radius must be >= 1 voxel, got {self.radius}")


@dataclass(frozen=True)
class OctaPhantomSpec:
    """Vascular OCTA scene with bulk-motion stripes and additive noise.

    Vessels are rasterized over a low decorrelation background; a vessel-free
    FAZ disc of `faz_diameter` voxels sits at the en-face center. Each
    B-frame is corrupted with probability bulk_p by a frame-wide additive
    offset drawn uniformly from [bulk_lo, bulk_hi], jittered per depth row.
    """

    dims: tuple[int, int, int]
    tubes: tuple[VesselTube, ...] = ()
    background: float = 8.0
    faz_diameter: float = 28.0
    bulk_p: float = 0.2
    bulk_lo: float = 10.0
    bulk_hi: float = 30.0
    noise_std: float = 20.0

    def __post_init__(self):
        object.__setattr__(self, "dims", _check_dims(self.dims))
        object.__setattr__(self, "tubes", tuple(self.tubes))
        if not 0.0 <= self.bulk_p <= 1.0:
            raise ValidationError(f"bulk_p must lie in [0, 1], got {self.bulk_p}")
        if self.bulk_lo > self.bulk_hi:
            raise ValidationError("bulk_lo must be <= bulk_hi")
        if self.noise_std < 0:
            raise ValidationError("noise_std must be >= 0")
        if not 0.0 <= self.background <= 255.0:
            raise ValidationError("background must lie in [0, 255]")
        _, nx, ny = self.dims
        if self.faz_diameter < 0 or self.faz_diameter > min(nx, ny):
            raise ValidationError(
                f"FAZ diameter {self.faz_diameter} does not fit the "
                f"{nx}x{ny} en-face plane"
            )


def default_octa_tubes(dims, faz_diameter: float = 28.0,
                       n_radial: int = 28) -> tuple[VesselTube, ...]:
    """Deterministic default vasculature.

    Two interleaved families of radial vessels (at slightly different
    depths) plus circumferential arcs, dense enough that the parafovea is
    well vascularized, as a real superficial plexus is. Everything is a
    fixed function of dims, so clean volumes never depend on the seed.
    """
    nz, nx, ny = _check_dims(dims)
    cx, cy = (nx - 1) / 2.0, (ny - 1) / 2.0
    r_start = faz_diameter / 2.0 + 2.0
    r_end = 0.48 * min(nx, ny)
    tubes = []
    for fam, (z_off, radius, intensity) in enumerate(
            ((-5.0, 3.5, 240.0), (5.0, 3.5, 240.0))):
        for i in range(n_radial):
            angle = 2.0 * math.pi * (i + 0.5 * fam) / n_radial + 0.3
            points = []
            for t in np.linspace(0.0, 1.0, 24):
                r = r_start + t * (r_end - r_start)
                wiggle = 2.5 * math.sin(5.0 * t * math.pi + 1.3 * i + 2.1 * fam)
                a = angle + wiggle / max(r, 1.0)
                z = nz / 2.0 + z_off + 4.0 * math.sin(2.0 * math.pi * t + 0.7 * i)
                points.append((z, cx + r * math.cos(a), cy + r * math.sin(a)))
            tubes.append(VesselTube(tuple(points), radius=radius, intensity=intensity))
    for ring in range(7):
        r = r_start + (ring + 0.5) / 7.0 * (r_end - r_start)
        points = []
        steps = 72
        for s in range(steps + 1):
            a = 2.0 * math.pi * s / steps
            z = nz / 2.0 + 4.0 * math.cos(3.0 * a + 1.1 * ring) + (-4.0 if ring % 2 else 4.0)
            points.append((z, cx + r * math.cos(a), cy + r * math.sin(a)))
        tubes.append(VesselTube(tuple(points), radius=2.5, intensity=220.0))
    return tuple(tubes)


def default_octa_spec(dims) -> OctaPhantomSpec:
    """OCTA spec with the default vasculature for the given dims."""
    return OctaPhantomSpec(dims=_check_dims(dims),
                           tubes=default_octa_tubes(dims))


def _oct_clean(spec: OctPhantomSpec) -> np.ndarray:
    nz, nx, ny = spec.dims
    x = np.arange(nx)[:, None]
    y = np.arange(ny)[None, :]
    z = np.arange(nz)[:, None, None]
    clean = np.full(spec.dims, spec.reflectivities[0], dtype=np.float64)
    for b, frac in enumerate(spec.boundaries):
        surface = frac * nz + spec.wave_amplitude * (
            np.sin(2.0 * math.pi * x / spec.wave_length + 0.9 * b)
            * np.cos(2.0 * math.pi * y / spec.wave_length + 0.6 * b)
        )
        clean = np.where(z >= surface[None, :, :], spec.reflectivities[b + 1], clean)
    return clean


def gen_oct_phantom(spec: OctPhantomSpec, seed: int):
    """Clean/noisy layered OCT pair; see the module docstring for the
    noise draw contract."""
    clean = _oct_clean(spec)
    rng = np.random.default_rng(seed)
    noisy = clean * rng.gamma(shape=spec.looks, scale=1.0 / spec.looks, size=spec.dims)
    if spec.noise_std > 0:
        noisy += rng.normal(0.0, spec.noise_std, size=spec.dims)
    np.clip(noisy, *INTENSITY_RANGE, out=noisy)
    pitch = _phantom_pitch(spec.dims)
    return (VolumeGrid(clean, pitch=pitch, intensity_range=INTENSITY_RANGE),
            VolumeGrid(noisy, pitch=pitch, intensity_range=INTENSITY_RANGE))


def _rasterize_tube(canvas: np.ndarray, tube: VesselTube) -> None:
    nz, nx, ny = canvas.shape
    pts = np.asarray(tube.path, dtype=np.float64)
    pad = tube.radius + 1.0
    for p0, p1 in zip(pts[:-1], pts[1:]):
        lo = np.maximum(np.floor(np.minimum(p0, p1) - pad).astype(int), 0)
        hi = np.minimum(np.ceil(np.maximum(p0, p1) + pad).astype(int) + 1,
                        [nz, nx, ny])
        if np.any(lo >= hi):
            continue
        zz = np.arange(lo[0], hi[0])[:, None, None]
        xx = np.arange(lo[1], hi[1])[None, :, None]
        yy = np.arange(lo[2], hi[2])[None, None, :]
        d = p1 - p0
        seg_len2 = float(d @ d)
        rel = np.stack(np.broadcast_arrays(zz - p0[0], xx - p0[1], yy - p0[2]), axis=-1)
        if seg_len2 == 0.0:
            closest = rel
        else:
            t = np.clip((rel @ d) / seg_len2, 0.0, 1.0)
            closest = rel - t[..., None] * d
        dist2 = np.sum(closest ** 2, axis=-1)
        region = canvas[lo[0]:hi[0], lo[1]:hi[1], lo[2]:hi[2]]
        np.maximum(region, np.where(dist2 <= tube.radius ** 2, tube.intensity, 0.0),
                   out=region)


def _octa_clean(spec: OctaPhantomSpec) -> np.ndarray:
    nz, nx, ny = spec.dims
    clean = np.full(spec.dims, spec.background, dtype=np.float64)
    for tube in spec.tubes:
        _rasterize_tube(clean, tube)
    # enforce the vessel-free FAZ disc
    cx, cy = (nx - 1) / 2.0, (ny - 1) / 2.0
    dx = np.arange(nx)[:, None] - cx
    dy = np.arange(ny)[None, :] - cy
    faz = dx ** 2 + dy ** 2 <= (spec.faz_diameter / 2.0) ** 2
    clean[:, faz] = spec.background
    return clean


def gen_octa_phantom(spec: OctaPhantomSpec, seed: int):
    """Clean/noisy vascular OCTA pair; see the module docstring for the
    noise draw contract."""
    clean = _octa_clean(spec)
    rng = np.random.default_rng(seed)
    noisy = clean.copy()
    nz, _, ny = spec.dims
    frame_draws = rng.random(ny)
    for y in np.nonzero(frame_draws < spec.bulk_p)[0]:
        base = rng.uniform(spec.bulk_lo, spec.bulk_hi)
        jitter = rng.uniform(0.25, 1.75, size=nz)
        noisy[:, :, y] += (base * jitter)[:, None]
    if spec.noise_std > 0:
        noisy += rng.normal(0.0, spec.noise_std, size=spec.dims)
    np.clip(noisy, *INTENSITY_RANGE, out=noisy)
    pitch = _phantom_pitch(spec.dims)
    return (VolumeGrid(clean, pitch=pitch, intensity_range=INTENSITY_RANGE),
            VolumeGrid(noisy, pitch=pitch, intensity_range=INTENSITY_RANGE))


# ---------------------------------------------------------------------------
# Text serialization (key = value lines)
# ---------------------------------------------------------------------------
#
# Common keys: kind (oct|octa), dims (nz,nx,ny).
# OCT keys: boundaries, reflectivities (comma lists), wave_amplitude,
#   wave_length, looks, noise_std.
# OCTA keys: background, faz_diameter, bulk_p, bulk_lo, bulk_hi, noise_std,
#   and either `vessels = default` or per-tube entries
#   tube.<i>.path (semicolon-separated z,x,y triples), tube.<i>.radius,
#   tube.<i>.intensity.

def format_spec_text(spec) -> str:
    """Serialize a phantom spec to key = value lines."""
    lines = []
    if isinstance(spec, OctPhantomSpec):
        lines.append("kind = oct")
        lines.append("dims = " + ",".join(str(n) for n in spec.dims))
        lines.append("boundaries = " + ",".join(f"{b:g}" for b in spec.boundaries))
        lines.append("reflectivities = " + ",".join(f"{r:g}" for r in spec.reflectivities))
        lines.append(f"wave_amplitude = {spec.wave_amplitude:g}")
        lines.append(f"wave_length = {spec.wave_length:g}")
        lines.append(f"looks = {spec.looks}")
        lines.append(f"noise_std = {spec.noise_std:g}")
    elif isinstance(spec, OctaPhantomSpec):
        lines.append("kind = octa")
        lines.append("dims = " + ",".join(str(n) for n in spec.dims))
        lines.append(f"background = {spec.background:g}")
        lines.append(f"faz_diameter = {spec.faz_diameter:g}")
        lines.append(f"bulk_p = {spec.bulk_p:g}")
        lines.append(f"bulk_lo = {spec.bulk_lo:g}")
        lines.append(f"bulk_hi = {spec.bulk_hi:g}")
        lines.append(f"noise_std = {spec.noise_std:g}")
        for i, tube in enumerate(spec.tubes):
            path = "; ".join(",".join(f"{c:g}" for c in p) for p in tube.path)
            lines.append(f"tube.{i}.path = {path}")
            lines.append(f"tube.{i}.radius = {tube.radius:g}")
            lines.append(f"tube.{i}.intensity = {tube.intensity:g}")
    else:
        raise ValidationError(f"unknown spec type {type(spec).__name__}")
    return "\n".join(lines) + "\n"


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def parse_spec_text(text: str):
    """Parse key = value lines into an OctPhantomSpec or OctaPhantomSpec."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"spec line {lineno} is not `key = value`: {raw!r}")
        key, value = line.split("=", 1)
        entries[key.strip()] = value.strip()

    kind = entries.pop("kind", None)
    if kind not in ("oct", "octa"):
        raise ValidationError(f"spec needs `kind = oct` or `kind = octa`, got {kind!r}")
    if "dims" not in entries:
        raise ValidationError("spec needs a dims entry")
    dims = tuple(int(v) for v in entries.pop("dims").split(","))

    if kind == "oct":
        kwargs = {}
        for key, cast in (("boundaries", _parse_floats),
                          ("reflectivities", _parse_floats),
                          ("wave_amplitude", float), ("wave_length", float),
                          ("looks", int), ("noise_std", float)):
            if key in entries:
                kwargs[key] = cast(entries.pop(key))
        if entries:
            raise ValidationError(f"unknown OCT spec keys: {sorted(entries)}")
        return OctPhantomSpec(dims=dims, **kwargs)

    kwargs = {}
    for key in ("background", "faz_diameter", "bulk_p", "bulk_lo", "bulk_hi", "noise_std"):
        if key in entries:
            kwargs[key] = float(entries.pop(key))
    vessels = entries.pop("vessels", None)
    tube_keys = sorted(k for k in entries if k.startswith("tube."))
    if vessels == "default":
        tubes = default_octa_tubes(dims, faz_diameter=kwargs.get("faz_diameter", 28.0))
    elif vessels is None:
        tubes = _parse_tubes(entries, tube_keys)
    else:
        raise ValidationError(f"unknown vessels value {vessels!r} (only 'default')")
    for k in tube_keys:
        entries.pop(k, None)
    if entries:
        raise ValidationError(f"unknown OCTA spec keys: {sorted(entries)}")
    return OctaPhantomSpec(dims=dims, tubes=tubes, **kwargs)


def _parse_tubes(entries: dict, tube_keys: list[str]) -> tuple[VesselTube, ...]:
    indices = sorted({int(k.split(".")[1]) for k in tube_keys})
    tubes = []
    for i in indices:
        try:
            path_text = entries[f"tube.{i}.path"]
            radius = float(entries[f"tube.{i}.radius"])
            intensity = float(entries[f"tube.{i}.intensity"])
        except KeyError as exc:
            raise ValidationError(f"tube {i} is missing key {exc}") from None
        path = tuple(tuple(float(c) for c in pt.split(","))
                     for pt in path_text.split(";") if pt.strip())
        if any(len(p) != 3 for p in path):
            raise ValidationError(f"tube {i} path points must be z,x,y triples")
        tubes.append(VesselTube(path, radius=radius, intensity=intensity))
    return tuple(tubes)
