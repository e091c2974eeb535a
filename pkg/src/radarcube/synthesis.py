"""Cube synthesis: noise sampling plus superposition of per-point responses.

``synthesize_naive`` accumulates each point's kernel one at a time and serves
as the oracle. ``synthesize_fast`` evaluates the same per-point tap formulas
in batch and accumulates them through one sparse matrix product, so the two
paths agree to floating-point accumulation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .core import (PointKind, RadarCube, RadarGrid, ReflectionPoint, ScenePointSet,
                   SensorPose, nearest_bins, project_to_bins)
from .psf import (AZIMUTH_TAP_CUTOFF, azimuth_base_spectrum, doppler_shape,
                  gaussian_shape, linear_resample, psf_kernel)


@dataclass(frozen=True)
class NoiseConfig:
    """Random clutter reflectors: count, intensity bounds, and RNG seed."""

    count: int = 2000
    intensity_min: float = 0.001
    intensity_max: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError(f"count must be >= 0, got {self.count}")
        if not (math.isfinite(self.intensity_min) and math.isfinite(self.intensity_max)):
            raise ValueError("intensity bounds must be finite")
        if self.intensity_min < 0 or self.intensity_max < self.intensity_min:
            raise ValueError("need 0 <= intensity_min <= intensity_max")


def default_noise_config(scene_points: list[ReflectionPoint], seed: int = 0,
                         count: int = 2000) -> NoiseConfig:
    """Noise bounds scaled to 0.1%..5% of the strongest scene intensity."""
    peak = max((p.intensity for p in scene_points), default=1.0)
    if peak <= 0:
        peak = 1.0
    return NoiseConfig(count=count, intensity_min=1e-3 * peak,
                       intensity_max=5e-2 * peak, seed=seed)


def sample_noise_points(grid: RadarGrid, cfg: NoiseConfig) -> list[ReflectionPoint]:
    """Noise reflectors uniform in all three bin axes, log-uniform in intensity.

    intensity_min == 0 degrades to a uniform draw over [0, intensity_max].
    The same seed always yields the same list.
    """
    rng = np.random.default_rng(cfg.seed)
    r = rng.uniform(0.0, grid.n_range, cfg.count)
    d = rng.uniform(0.0, grid.n_doppler, cfg.count)
    a = rng.uniform(0.0, grid.n_azimuth, cfg.count)
    if cfg.intensity_min > 0:
        intensity = np.exp(rng.uniform(math.log(cfg.intensity_min),
                                       math.log(cfg.intensity_max), cfg.count))
    else:
        intensity = rng.uniform(cfg.intensity_min, cfg.intensity_max, cfg.count)
    return [ReflectionPoint(float(r[i]), float(d[i]), float(a[i]),
                            float(intensity[i]), PointKind.NOISE)
            for i in range(cfg.count)]


def _point_arrays(points: list[ReflectionPoint], grid: RadarGrid):
    r = np.empty(len(points))
    d = np.empty(len(points))
    a = np.empty(len(points))
    intensity = np.empty(len(points))
    for i, p in enumerate(points):
        if not p.in_bounds(grid):
            raise ValueError(f"point {i} out of bounds for grid {grid.shape}: "
                             f"({p.r_bin}, {p.d_bin}, {p.a_bin})")
        r[i], d[i], a[i], intensity[i] = p.r_bin, p.d_bin, p.a_bin, p.intensity
    return r, d, a, intensity


def synthesize_naive(points: list[ReflectionPoint], params,
                     grid: RadarGrid) -> RadarCube:
    """Accumulate each point's separable kernel into the cube, one at a time.

    Kernel mass falling outside the cube is truncated. Accumulation follows
    the input list order in double precision.
    """
    values = np.zeros(grid.shape)
    for i, p in enumerate(points):
        if not p.in_bounds(grid):
            raise ValueError(f"point {i} out of bounds for grid {grid.shape}: "
                             f"({p.r_bin}, {p.d_bin}, {p.a_bin})")
        r0 = min(int(math.floor(p.r_bin + 0.5)), grid.n_range - 1)
        d0 = min(int(math.floor(p.d_bin + 0.5)), grid.n_doppler - 1)
        a0 = min(int(math.floor(p.a_bin + 0.5)), grid.n_azimuth - 1)
        kern = psf_kernel(params, grid,
                          (p.r_bin - r0, p.d_bin - d0, p.a_bin - a0))
        rb = r0 + kern.range_offsets
        db = d0 + kern.doppler_offsets
        ab = a0 + kern.azimuth_offsets
        rm = (rb >= 0) & (rb < grid.n_range)
        dm = (db >= 0) & (db < grid.n_doppler)
        am = (ab >= 0) & (ab < grid.n_azimuth)
        patch = np.einsum("i,j,k->ijk", kern.range_weights[rm],
                          kern.doppler_weights[dm], kern.azimuth_weights[am])
        values[np.ix_(rb[rm], db[dm], ab[am])] += p.intensity * patch
    return RadarCube(grid, values)


def synthesize_fast(points: list[ReflectionPoint], params,
                    grid: RadarGrid) -> RadarCube:
    """Batched synthesis equivalent to :func:`synthesize_naive`.

    All points share one waveform parameter set, so the per-point tap weights
    are evaluated in batch (same formulas as the per-point kernel) and
    accumulated with a single sparse (range, doppler)-patch by azimuth-row
    matrix product.
    """
    if not points:
        return RadarCube.zeros(grid)
    n_r, n_d, n_a = grid.shape
    r, d, a, intensity = _point_arrays(points, grid)

    r0 = nearest_bins(r, n_r)
    d0 = nearest_bins(d, n_d)
    dr = r - r0
    dd = d - d0

    r_radius = math.ceil(4.0 * params.sigma)
    r_off = np.arange(-r_radius, r_radius + 1, dtype=np.int64)
    wr = gaussian_shape(r_off[None, :] - dr[:, None], params.sigma)
    d_radius = math.ceil(params.s_doppler)
    d_off = np.arange(-d_radius, d_radius + 1, dtype=np.int64)
    wd = doppler_shape(d_off[None, :] - dd[:, None], params.g, params.s_doppler)

    # Per-point azimuth rows: the fractional shift of the shared spectrum is a
    # linear interpolation of one table, so a dense gather reproduces the
    # per-point kernel taps exactly.
    if n_a < params.n_window:
        raise ValueError(f"azimuth axis ({n_a}) shorter than window ({params.n_window})")
    table = azimuth_base_spectrum(params.n_window, params.p_window, n_a)
    c0 = n_a // 2
    positions = (np.arange(n_a, dtype=np.float64)[None, :] - a[:, None]) + c0
    rows_a = linear_resample(table, positions)
    rows_a[rows_a < AZIMUTH_TAP_CUTOFF] = 0.0

    patch = intensity[:, None, None] * wr[:, :, None] * wd[:, None, :]
    rb = r0[:, None, None] + r_off[None, :, None]
    db = d0[:, None, None] + d_off[None, None, :]
    valid = (rb >= 0) & (rb < n_r) & (db >= 0) & (db < n_d)
    flat_rd = (rb * n_d + db)[valid]
    cols = np.broadcast_to(np.arange(len(points))[:, None, None], patch.shape)[valid]
    mat = sparse.csr_matrix((patch[valid], (flat_rd, cols)),
                            shape=(n_r * n_d, len(points)))
    values = (mat @ rows_a).reshape(n_r, n_d, n_a)
    return RadarCube(grid, values)


def synthesize_scene(actors, pose: SensorPose, grid: RadarGrid, params,
                     noise_cfg: NoiseConfig, intensity_scale: float | None = None,
                     ) -> tuple[RadarCube, ScenePointSet, list[ReflectionPoint]]:
    """Project actors, add sampled noise, and synthesize via the fast path.

    Returns the cube, the scene bin set, and the combined point list (scene
    points first, then noise) for later editing.
    """
    if intensity_scale is None:
        scene = project_to_bins(actors, pose, grid)
    else:
        scene = project_to_bins(actors, pose, grid, intensity_scale)
    noise = sample_noise_points(grid, noise_cfg)
    points = scene + noise
    cube = synthesize_fast(points, params, grid)
    return cube, ScenePointSet.from_points(scene, grid), points
