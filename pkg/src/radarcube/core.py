"""Core domain types and world-to-bin geometry for radar cube simulation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

TAU = 2.0 * math.pi

# Scale k in the point intensity model k * rcs / range**4, chosen so a
# 1 m^2 target at 10 m maps to unit intensity.
DEFAULT_INTENSITY_SCALE = 1.0e4


def wrap_angle(angle: float) -> float:
    """Wrap an angle in radians to (-pi, pi]."""
    a = (angle + math.pi) % TAU - math.pi
    if a <= -math.pi:
        a += TAU
    return a


def nearest_bin(value: float, n_bins: int) -> int:
    """Nearest integer bin for a fractional coordinate, half rounded up.

    Values in the open sliver (n_bins - 0.5, n_bins) clamp to the last bin so
    every in-bounds fractional coordinate maps to a valid index.
    """
    return min(int(math.floor(value + 0.5)), n_bins - 1)


def nearest_bins(values: np.ndarray, n_bins: int) -> np.ndarray:
    """Vectorized :func:`nearest_bin`."""
    return np.minimum(np.floor(np.asarray(values) + 0.5).astype(np.int64), n_bins - 1)


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")


class PointKind(enum.Enum):
    """Origin of a reflection point: part of the scene or synthetic clutter."""

    SCENE = "scene"
    NOISE = "noise"


@dataclass(frozen=True)
class RadarGrid:
    """Bin counts and physical resolutions of the range/Doppler/azimuth axes.

    The Doppler axis is two-sided: bin ``n_doppler // 2`` corresponds to zero
    radial velocity, negative (approaching) velocities map below it.
    Azimuth covers ``azimuth_fov`` radians symmetric about boresight and does
    not wrap.
    """

    n_range: int
    n_doppler: int
    n_azimuth: int
    range_resolution: float    # meters per bin
    doppler_resolution: float  # meters/second per bin
    azimuth_fov: float         # radians, total field of view

    def __post_init__(self) -> None:
        for name in ("n_range", "n_doppler", "n_azimuth"):
            n = getattr(self, name)
            if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
                raise ValueError(f"{name} must be an integer, got {n!r}")
            if n < 8:
                raise ValueError(f"{name} must be >= 8, got {n}")
        _require_finite("resolution", self.range_resolution,
                        self.doppler_resolution, self.azimuth_fov)
        if self.range_resolution <= 0 or self.doppler_resolution <= 0:
            raise ValueError("resolutions must be strictly positive")
        if not 0 < self.azimuth_fov <= math.pi:
            raise ValueError(f"azimuth_fov must be in (0, pi], got {self.azimuth_fov}")

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n_range, self.n_doppler, self.n_azimuth)

    @property
    def max_range(self) -> float:
        return self.n_range * self.range_resolution

    @property
    def doppler_center(self) -> int:
        """Bin index of zero radial velocity."""
        return self.n_doppler // 2


@dataclass(frozen=True)
class WaveformParams:
    """Per-axis shape parameters of the single-reflector cube response.

    sigma      : standard deviation of the range Gaussian, in range bins
    g          : amplitude gradient of the segmented-linear Doppler slice
    n_window   : azimuth window length in samples
    p_window   : azimuth window taper parameter
    s_doppler  : half-width of the Doppler slice support, in Doppler bins
    """

    sigma: float
    g: float
    n_window: int
    p_window: float
    s_doppler: float = 2.0

    def __post_init__(self) -> None:
        _require_finite("waveform parameter", self.sigma, self.g,
                        self.p_window, self.s_doppler)
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.g <= 0:
            raise ValueError(f"g must be > 0, got {self.g}")
        if not isinstance(self.n_window, (int, np.integer)) or self.n_window < 3:
            raise ValueError(f"n_window must be an integer >= 3, got {self.n_window!r}")
        if not 0 <= self.p_window < 1:
            raise ValueError(f"p_window must be in [0, 1), got {self.p_window}")
        if self.s_doppler <= 0:
            raise ValueError(f"s_doppler must be > 0, got {self.s_doppler}")


@dataclass(frozen=True)
class LobeParams:
    """Azimuth beam descriptors: main-lobe width and first-sidelobe peak ratio.

    rs is the null-to-null main-lobe width in azimuth bins; lam is the largest
    local maximum outside the main lobe divided by the main-lobe peak.
    """

    rs: float
    lam: float

    def __post_init__(self) -> None:
        _require_finite("lobe parameter", self.rs, self.lam)
        if self.rs <= 0:
            raise ValueError(f"rs must be > 0, got {self.rs}")
        if not 0 <= self.lam < 1:
            raise ValueError(f"lam must be in [0, 1), got {self.lam}")


@dataclass(frozen=True)
class ReflectionPoint:
    """One reflector at fractional bin coordinates with a reflection intensity."""

    r_bin: float
    d_bin: float
    a_bin: float
    intensity: float
    kind: PointKind
    actor_id: int | None = None

    def __post_init__(self) -> None:
        _require_finite("bin coordinate", self.r_bin, self.d_bin, self.a_bin)
        _require_finite("intensity", self.intensity)
        if self.intensity < 0:
            raise ValueError(f"intensity must be >= 0, got {self.intensity}")
        if not isinstance(self.kind, PointKind):
            raise ValueError(f"kind must be a PointKind, got {self.kind!r}")
        if self.actor_id is not None and self.kind is not PointKind.SCENE:
            raise ValueError("actor_id is only valid on scene points")

    def in_bounds(self, grid: RadarGrid) -> bool:
        return (0 <= self.r_bin < grid.n_range
                and 0 <= self.d_bin < grid.n_doppler
                and 0 <= self.a_bin < grid.n_azimuth)


@dataclass(frozen=True)
class ActorPoint:
    """A Cartesian-world reflector with velocity and radar cross section."""

    x: float
    y: float
    vx: float
    vy: float
    rcs: float
    actor_id: int

    def __post_init__(self) -> None:
        _require_finite("actor coordinate", self.x, self.y, self.vx, self.vy)
        _require_finite("rcs", self.rcs)
        if self.rcs < 0:
            raise ValueError(f"rcs must be >= 0, got {self.rcs}")


@dataclass(frozen=True)
class SensorPose:
    """Sensor position, heading, and ego velocity in the world frame."""

    x: float
    y: float
    heading: float
    vx: float = 0.0
    vy: float = 0.0

    def __post_init__(self) -> None:
        _require_finite("pose", self.x, self.y, self.heading, self.vx, self.vy)
        if not -math.pi < self.heading <= math.pi:
            raise ValueError(
                f"heading must be in (-pi, pi], got {self.heading}; "
                "use wrap_angle() to normalize")


class RadarCube:
    """Dense non-negative tensor over (range, doppler, azimuth) bins.

    Values are stored float64 and frozen after construction; the instance is
    safe to share read-only across threads.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: RadarGrid, values: np.ndarray):
        values = np.ascontiguousarray(values, dtype=np.float64)
        if values.shape != grid.shape:
            raise ValueError(f"values shape {values.shape} != grid shape {grid.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("cube values must be finite")
        if values.size and values.min() < 0:
            raise ValueError("cube values must be >= 0")
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("RadarCube is immutable")

    @classmethod
    def zeros(cls, grid: RadarGrid) -> "RadarCube":
        return cls(grid, np.zeros(grid.shape))

    def __eq__(self, other) -> bool:
        return (isinstance(other, RadarCube) and self.grid == other.grid
                and np.array_equal(self.values, other.values))


class ScenePointSet:
    """Unique integer (range, doppler, azimuth) bins occupied by scene points."""

    __slots__ = ("indices",)

    def __init__(self, indices: np.ndarray):
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size == 0:
            idx = idx.reshape(0, 3)
        if idx.ndim != 2 or idx.shape[1] != 3:
            raise ValueError(f"indices must be (k, 3), got shape {idx.shape}")
        if idx.size and idx.min() < 0:
            raise ValueError("bin indices must be non-negative")
        if len(np.unique(idx, axis=0)) != len(idx):
            raise ValueError("bin triples must be unique")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    def __setattr__(self, name, value):
        raise AttributeError("ScenePointSet is immutable")

    def __len__(self) -> int:
        return len(self.indices)

    @classmethod
    def from_points(cls, points: list[ReflectionPoint], grid: RadarGrid) -> "ScenePointSet":
        """Rounded bins of all scene-kind points, deduplicated."""
        triples = []
        for i, p in enumerate(points):
            if not p.in_bounds(grid):
                raise ValueError(f"point {i} out of bounds for grid {grid.shape}")
            if p.kind is PointKind.SCENE:
                triples.append((nearest_bin(p.r_bin, grid.n_range),
                                nearest_bin(p.d_bin, grid.n_doppler),
                                nearest_bin(p.a_bin, grid.n_azimuth)))
        if not triples:
            return cls(np.empty((0, 3), dtype=np.int64))
        return cls(np.unique(np.asarray(triples, dtype=np.int64), axis=0))


def radar_equation_intensity(rcs: float, range_m: float,
                             k: float = DEFAULT_INTENSITY_SCALE) -> float:
    """Reflected intensity of a target: k * rcs / range**4.

    Raises ValueError for non-positive range (degenerate geometry).
    """
    _require_finite("radar equation input", rcs, range_m, k)
    if range_m <= 0:
        raise ValueError(f"range must be > 0, got {range_m}")
    if rcs < 0:
        raise ValueError(f"rcs must be >= 0, got {rcs}")
    if k <= 0:
        raise ValueError(f"scale constant must be > 0, got {k}")
    return k * rcs / range_m**4


def project_to_bins(actors: list[ActorPoint], pose: SensorPose, grid: RadarGrid,
                    intensity_scale: float = DEFAULT_INTENSITY_SCALE,
                    ) -> list[ReflectionPoint]:
    """Project world-frame actors into fractional radar bins.

    Range is the Euclidean distance from the pose, azimuth the bearing
    relative to the heading mapped linearly across the field of view, and
    Doppler the radial component of the actor velocity relative to the ego
    velocity (positive = receding). Actors outside the field of view, beyond
    maximum range, with out-of-range Doppler, or exactly at the sensor are
    dropped, not errors.
    """
    half_fov = grid.azimuth_fov / 2.0
    out: list[ReflectionPoint] = []
    for actor in actors:
        dx = actor.x - pose.x
        dy = actor.y - pose.y
        range_m = math.hypot(dx, dy)
        if range_m <= 0.0:
            continue
        bearing = wrap_angle(math.atan2(dy, dx) - pose.heading)
        a_bin = (bearing + half_fov) / grid.azimuth_fov * grid.n_azimuth
        if not 0 <= a_bin < grid.n_azimuth:
            continue
        r_bin = range_m / grid.range_resolution
        if r_bin >= grid.n_range:
            continue
        radial = ((actor.vx - pose.vx) * dx + (actor.vy - pose.vy) * dy) / range_m
        d_bin = grid.doppler_center + radial / grid.doppler_resolution
        if not 0 <= d_bin < grid.n_doppler:
            continue
        out.append(ReflectionPoint(
            r_bin=r_bin, d_bin=d_bin, a_bin=a_bin,
            intensity=radar_equation_intensity(actor.rcs, range_m, intensity_scale),
            kind=PointKind.SCENE, actor_id=actor.actor_id))
    return out


def build_environment_tensor(points: list[ReflectionPoint], grid: RadarGrid,
                             ) -> tuple[RadarCube, ScenePointSet]:
    """Scatter point intensities onto their nearest bins.

    Points rounding to the same bin sum. Returns the sparse environment cube
    and the set of bins receiving scene-kind points.
    """
    values = np.zeros(grid.shape)
    scene_bins = []
    for i, p in enumerate(points):
        if not p.in_bounds(grid):
            raise ValueError(f"point {i} out of bounds for grid {grid.shape}: "
                             f"({p.r_bin}, {p.d_bin}, {p.a_bin})")
        rb = nearest_bin(p.r_bin, grid.n_range)
        db = nearest_bin(p.d_bin, grid.n_doppler)
        ab = nearest_bin(p.a_bin, grid.n_azimuth)
        values[rb, db, ab] += p.intensity
        if p.kind is PointKind.SCENE:
            scene_bins.append((rb, db, ab))
    if scene_bins:
        point_set = ScenePointSet(np.unique(np.asarray(scene_bins, dtype=np.int64), axis=0))
    else:
        point_set = ScenePointSet(np.empty((0, 3), dtype=np.int64))
    return RadarCube(grid, values), point_set
