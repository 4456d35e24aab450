"""Cone-adapted band-limited shearlet filter banks in the frequency domain.

Filters are built directly on the DFT grid from Meyer-type windows: a radial
bandpass along the cone's dominant frequency axis and an angular bump in the
shear variable (the subordinate-to-dominant frequency ratio). A 3D filter is
the pointwise product of two 2D wedge filters that share the dominant axis,
so it is stored in factored form and only expanded on demand.

All filters are real, non-negative, and even-symmetric on the discrete grid
(so spatial-domain filters are real). Exact inversion comes from dividing by
the dual-frame weight field W = sum of squared filters, which the build
checks against a hard lower bound.

Arrays are kept in the standard DFT layout (DC at index 0); the construction
itself is defined on the centered grid and evaluated through per-axis signed
frequency coordinates, so no shifting ever happens at transform time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, FrameDegeneracyError

# Lowpass cutoff as a fraction of Nyquist. Leaves >= 2 octaves of bandpass
# room for num_scales <= 2 on grids of 32+ samples per axis.
RHO0 = 0.125

# Frame lower bound checked at build time.
W_MIN = 1e-6

MIN_DIM = 16


# ---------------------------------------------------------------------------
# Meyer-type windows
# ---------------------------------------------------------------------------

def meyer_smooth(x):
    """Smooth step: 0 below 0, 1 above 1, C^3 polynomial in between."""
    x = np.clip(x, 0.0, 1.0)
    return x ** 4 * (35.0 - 84.0 * x + 70.0 * x ** 2 - 20.0 * x ** 3)


def _rise(t):
    return np.sin(0.5 * np.pi * meyer_smooth(t))


def _fall(t):
    return np.cos(0.5 * np.pi * meyer_smooth(t))


def radial_lowpass(u):
    """Lowpass window on |frequency|/Nyquist: 1 on [0, RHO0/2], 0 past RHO0."""
    u = np.asarray(u, dtype=np.float64)
    return _fall((u - 0.5 * RHO0) / (0.5 * RHO0))


def radial_bandpass(u, scale, num_scales):
    """Bandpass window for one scale, rising on [2^(j-1), 2^j] * RHO0.

    Interior scales fall back to zero over the next octave (so adjacent
    squared windows tile); the finest scale stays at one out to the grid
    corner, which keeps the weight field bounded below at high frequency.
    """
    u = np.asarray(u, dtype=np.float64)
    lo = 2.0 ** (scale - 1) * RHO0
    out = _rise((u - lo) / lo)
    if scale < num_scales - 1:
        mid = 2.0 * lo
        out = np.where(u > mid, _fall((u - mid) / mid), out)
    return out


def shear_bump(t):
    """Angular bump on [-1, 1] with bump(0) = 1; squares tile under integer shifts."""
    t = np.asarray(t, dtype=np.float64)
    return np.where(np.abs(t) <= 1.0, _fall(np.abs(t)), 0.0)


def cone_blend(d, cell):
    """Smooth cone membership across the diagonal.

    `d` is |subordinate| - |dominant| in normalized frequency; the blend
    drops from 1 to 0 over a band of one grid cell (`cell`) centered on the
    diagonal, and the squared blends of the two adjacent cones sum to one
    across the seam.
    """
    d = np.asarray(d, dtype=np.float64)
    return _fall(d / cell + 0.5)


# ---------------------------------------------------------------------------
# Discrete frequency grid helpers
# ---------------------------------------------------------------------------

def freq_coords(n: int) -> np.ndarray:
    """Signed per-axis frequency, normalized to Nyquist, DFT layout.

    Values are k/(n/2) for k = 0..n/2-1, then -1, -(n/2-1)/(n/2), .., -1/(n/2).
    """
    return np.fft.fftfreq(n, d=1.0 / n) / (n / 2.0)


def _mirror(arr: np.ndarray) -> np.ndarray:
    """Values of `arr` at the frequency-negated grid positions."""
    ax = tuple(range(arr.ndim))
    return np.roll(arr[tuple(slice(None, None, -1) for _ in ax)], 1, axis=ax)


def _symmetrize(arr: np.ndarray) -> np.ndarray:
    """Average with the mirrored copy; a no-op everywhere except Nyquist lines."""
    return 0.5 * (arr + _mirror(arr))


# ---------------------------------------------------------------------------
# Configuration and index types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShearletConfig:
    """Parameters of a shearlet system.

    num_scales: number of dyadic bandpass scales (J >= 1).
    shear_levels: per-scale shear level L_j; scale j carries shears
        |k| <= 2^(L_j) along each subordinate axis.
    dims: grid dimensions (2 or 3 entries, each even and >= 16).
    threshold_lowpass: default policy flag carried to denoising.
    """

    num_scales: int
    shear_levels: tuple[int, ...]
    dims: tuple[int, ...]
    threshold_lowpass: bool = True

    def __post_init__(self):
        object.__setattr__(self, "shear_levels", tuple(int(v) for v in self.shear_levels))
        object.__setattr__(self, "dims", tuple(int(v) for v in self.dims))
        if self.num_scales < 1:
            raise ConfigError(f"num_scales must be >= 1, got {self.num_scales}")
        if len(self.shear_levels) != self.num_scales:
            raise ConfigError(
                f"need one shear level per scale: {len(self.shear_levels)} "
                f"levels for {self.num_scales} scales"
            )
        if any(l < 0 for l in self.shear_levels):
            raise ConfigError(f"shear levels must be >= 0, got {self.shear_levels}")
        if len(self.dims) not in (2, 3):
            raise ConfigError(f"dims must have 2 or 3 entries, got {self.dims}")
        for n in self.dims:
            if n < MIN_DIM:
                raise ConfigError(f"dimension {n} below the minimum of {MIN_DIM}")
            if n % 2 != 0:
                raise ConfigError(f"dimension {n} must be even")

    @property
    def ndim(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class SubbandIndex:
    """Identity of one subband: the lowpass, or (scale, pyramid, shears).

    `pyramid` is the dominant frequency axis (0-based grid axis); 2D systems
    use 0 for the depth-dominant cone and 1 for the fast-axis-dominant cone.
    The lowpass entry carries no scale/pyramid/shears.
    """

    kind: str  # "lowpass" | "directional"
    scale: int | None = None
    pyramid: int | None = None
    shears: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind == "lowpass":
            if self.scale is not None or self.pyramid is not None or self.shears:
                raise ConfigError("lowpass index carries no scale/pyramid/shears")
        elif self.kind != "directional":
            raise ConfigError(f"unknown subband kind {self.kind!r}")

    def label(self) -> str:
        if self.kind == "lowpass":
            return "lowpass"
        shears = ",".join(str(k) for k in self.shears)
        return f"j{self.scale}.p{self.pyramid}.k{shears}"


# ---------------------------------------------------------------------------
# Filters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralFilter:
    """One frequency-domain filter, stored compactly.

    mode 4 holds a dense 2D array; modes 0..2 hold the two 2D wedge factors
    of a 3D filter (dominant axis = mode), laid out in ascending grid-axis
    order; mode 3 is the separable 3D lowpass (a 2D plane times a vector).
    `dense()` expands onto the full grid; `prepared()` returns (mode, a, b)
    arrays sliced for either the full or the rfft half spectrum.
    """

    dims: tuple[int, ...]
    mode: int
    a: np.ndarray
    b: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def prepared(self, half: bool):
        key = bool(half)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        a, b = self.a, self.b
        if half:
            ncut = self.dims[-1] // 2 + 1
            # Only factors spanning the last grid axis are cut by rfft layout.
            if self.mode in (0, 2):  # a on (0,1)/(0,2); b on (0,2)/(1,2)
                if self.mode == 2:
                    a = np.ascontiguousarray(a[:, :ncut])
                    b = np.ascontiguousarray(b[:, :ncut])
                else:
                    b = np.ascontiguousarray(b[:, :ncut])
            elif self.mode == 1:  # a on (0,1); b on (1,2)
                b = np.ascontiguousarray(b[:, :ncut])
            elif self.mode == 3:  # a on (0,1); b along axis 2
                b = np.ascontiguousarray(b[:ncut])
            else:  # dense 2D
                a = np.ascontiguousarray(a[:, :ncut])
        out = (self.mode, a, b)
        self._cache[key] = out
        return out

    def dense(self, half: bool = False) -> np.ndarray:
        """Materialize the filter on the full (or rfft-half) frequency grid."""
        mode, a, b = self.prepared(half)
        if mode == 4:
            return a.copy()
        if mode == 0:
            return a[:, :, None] * b[:, None, :]
        if mode == 1:
            return a[:, :, None] * b[None, :, :]
        if mode == 2:
            return a[:, None, :] * b[None, :, :]
        return a[:, :, None] * b[None, None, :]


@dataclass(frozen=True)
class ShearletSystem:
    """Immutable bank of frequency-domain filters plus the dual-frame weights.

    `filters` is ordered deterministically: lowpass first, then ascending
    (scale, pyramid, shears). `weight_field` is W = sum of squared filters on
    the full grid; reconstruction divides by it.
    """

    config: ShearletConfig
    filters: tuple[tuple[SubbandIndex, SpectralFilter], ...]
    weight_field: np.ndarray
    weight_half: np.ndarray
    system_id: str

    def __len__(self) -> int:
        return len(self.filters)


def filter_count(config: ShearletConfig) -> int:
    """Number of filters the built system will contain.

    1 lowpass plus, per scale j, (number of pyramids) * (2^(L_j+1)+1)^(D-1)
    directional wedges, D the dimensionality (2 pyramids in 2D, 3 in 3D).
    """
    d = config.ndim
    pyramids = 2 if d == 2 else 3
    total = 1
    for level in config.shear_levels:
        total += pyramids * (2 ** (level + 1) + 1) ** (d - 1)
    return total


def _system_id(config: ShearletConfig) -> str:
    levels = ",".join(str(l) for l in config.shear_levels)
    dims = "x".join(str(n) for n in config.dims)
    return f"shearlet{config.ndim}d:J{config.num_scales}:L{levels}:{dims}"


def _wedge_factor(coord_dom: np.ndarray, coord_sub: np.ndarray, n_sub: int,
                  scale: int, num_scales: int, level: int, shear: int) -> np.ndarray:
    """2D wedge on the (dominant, subordinate) coordinate plane.

    Rows follow the dominant axis, columns the subordinate axis. Border
    shears (|k| = 2^level) get the smooth cone blend; interior wedges already
    vanish outside the cone. The result is symmetrized so the Nyquist rows,
    where the signed ratio has no mirror partner, stay even under frequency
    negation.
    """
    cd = coord_dom[:, None]
    cs = coord_sub[None, :]
    band = radial_bandpass(np.abs(coord_dom), scale, num_scales)[:, None]
    ratio = np.divide(cs, cd, out=np.zeros((cd.size, cs.size)), where=cd != 0.0)
    wedge = band * shear_bump(2.0 ** level * ratio - shear)
    if abs(shear) == 2 ** level:
        wedge = wedge * cone_blend(np.abs(cs) - np.abs(cd), 2.0 / n_sub)
    return _symmetrize(wedge)


def _build_wedge_planes(config: ShearletConfig) -> dict:
    """All 2D wedge factors, keyed by (dominant axis, subordinate axis, scale, shear)."""
    coords = [freq_coords(n) for n in config.dims]
    planes: dict[tuple[int, int, int, int], np.ndarray] = {}
    axes = range(config.ndim)
    for dom in axes:
        for sub in axes:
            if sub == dom:
                continue
            for j, level in enumerate(config.shear_levels):
                for k in range(-(2 ** level), 2 ** level + 1):
                    planes[(dom, sub, j, k)] = _wedge_factor(
                        coords[dom], coords[sub], config.dims[sub],
                        j, config.num_scales, level, k,
                    )
    return planes


def _ascending(arr: np.ndarray, dom: int, sub: int) -> np.ndarray:
    """Reorder a (dominant, subordinate) plane into ascending grid-axis layout."""
    out = arr if dom < sub else arr.T
    return np.ascontiguousarray(out)


def _directional_indices(config: ShearletConfig):
    pyramids = range(2 if config.ndim == 2 else 3)
    for j, level in enumerate(config.shear_levels):
        shear_range = range(-(2 ** level), 2 ** level + 1)
        for p in pyramids:
            if config.ndim == 2:
                for k in shear_range:
                    yield SubbandIndex("directional", j, p, (k,))
            else:
                for k1 in shear_range:
                    for k2 in shear_range:
                        yield SubbandIndex("directional", j, p, (k1, k2))


def build_system(config: ShearletConfig) -> ShearletSystem:
    """Build the filter bank for a 2D or 3D configuration."""
    if config.ndim == 2:
        return build_system_2d(config)
    return build_system_3d(config)


def build_system_2d(config: ShearletConfig) -> ShearletSystem:
    """2D cone-adapted system: separable lowpass plus per-cone wedge filters."""
    if config.ndim != 2:
        raise ConfigError(f"build_system_2d needs 2D dims, got {config.dims}")
    n0, n1 = config.dims
    planes = _build_wedge_planes(config)
    phi0 = radial_lowpass(np.abs(freq_coords(n0)))
    phi1 = radial_lowpass(np.abs(freq_coords(n1)))
    lowpass = phi0[:, None] * phi1[None, :]

    filters: list[tuple[SubbandIndex, SpectralFilter]] = [
        (SubbandIndex("lowpass"), SpectralFilter(config.dims, 4, lowpass))
    ]
    weight = lowpass ** 2
    for idx in _directional_indices(config):
        dom = idx.pyramid
        sub = 1 - dom
        dense = _ascending(planes[(dom, sub, idx.scale, idx.shears[0])], dom, sub)
        filters.append((idx, SpectralFilter(config.dims, 4, dense)))
        weight += dense ** 2
    return _finish(config, filters, weight)


def build_system_3d(config: ShearletConfig) -> ShearletSystem:
    """3D system: each filter is the product of two 2D wedges sharing the
    dominant axis, one per subordinate axis, stored factored."""
    if config.ndim != 3:
        raise ConfigError(f"build_system_3d needs 3D dims, got {config.dims}")
    planes = _build_wedge_planes(config)
    phis = [radial_lowpass(np.abs(freq_coords(n))) for n in config.dims]
    lowpass_plane = np.ascontiguousarray(phis[0][:, None] * phis[1][None, :])

    filters: list[tuple[SubbandIndex, SpectralFilter]] = [
        (SubbandIndex("lowpass"),
         SpectralFilter(config.dims, 3, lowpass_plane, phis[2]))
    ]
    weight = (lowpass_plane[:, :, None] * phis[2][None, None, :]) ** 2

    sub_axes = {0: (1, 2), 1: (0, 2), 2: (0, 1)}
    for j, level in enumerate(config.shear_levels):
        shears = range(-(2 ** level), 2 ** level + 1)
        for dom in range(3):
            sa, sb = sub_axes[dom]
            fac_a = {k: _ascending(planes[(dom, sa, j, k)], dom, sa) for k in shears}
            fac_b = {k: _ascending(planes[(dom, sb, j, k)], dom, sb) for k in shears}
            for k1 in shears:
                for k2 in shears:
                    idx = SubbandIndex("directional", j, dom, (k1, k2))
                    filters.append(
                        (idx, SpectralFilter(config.dims, dom, fac_a[k1], fac_b[k2]))
                    )
            sq_a = sum(f ** 2 for f in fac_a.values())
            sq_b = sum(f ** 2 for f in fac_b.values())
            if dom == 0:      # a on (0,1), b on (0,2)
                weight += sq_a[:, :, None] * sq_b[:, None, :]
            elif dom == 1:    # a on (0,1), b on (1,2)
                weight += sq_a[:, :, None] * sq_b[None, :, :]
            else:             # a on (0,2), b on (1,2)
                weight += sq_a[:, None, :] * sq_b[None, :, :]
    return _finish(config, filters, weight)


def _finish(config, filters, weight) -> ShearletSystem:
    if not np.all(np.isfinite(weight)):
        raise FrameDegeneracyError("weight field contains non-finite values")
    wmin = float(weight.min())
    if wmin < W_MIN:
        raise FrameDegeneracyError(
            f"frame weight minimum {wmin:.3e} below the bound {W_MIN:.0e}"
        )
    return ShearletSystem(
        config=config,
        filters=tuple(filters),
        weight_field=weight,
        weight_half=np.ascontiguousarray(weight[..., : config.dims[-1] // 2 + 1]),
        system_id=_system_id(config),
    )
