"""Inverse problems: CA-CFAR peak extraction and waveform parameter fitting.

CFAR compares each cell against the mean of a surrounding training shell
(guard cells excluded, shell clipped at cube edges) and keeps strict local
maxima above an absolute floor. Fitting recovers the per-axis slice
parameters from measured cubes around isolated peaks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize
from scipy.ndimage import maximum_filter

from .core import LobeParams, PointKind, RadarCube, ReflectionPoint, WaveformParams
from .psf import derive_lobe_params, doppler_shape, fit_window_from_lobes, measure_lobes

DEFAULT_N_CANDIDATES = tuple(range(4, 17))
DEFAULT_P_CANDIDATES = tuple(round(0.05 * i, 2) for i in range(11))


@dataclass(frozen=True)
class CfarConfig:
    """Cell-averaging CFAR window geometry and thresholds.

    guard and train are per-axis half-widths in bins; a cell is detected when
    its value exceeds ``alpha`` times the training-shell mean, is a strict
    local maximum in its 3x3x3 neighborhood, and is at least ``min_peak``.
    """

    guard: int = 2
    train: int = 4
    alpha: float = 4.0
    min_peak: float = 0.0

    def __post_init__(self) -> None:
        if self.guard < 0:
            raise ValueError(f"guard must be >= 0, got {self.guard}")
        if self.train < 1:
            raise ValueError(f"train must be >= 1, got {self.train}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.min_peak < 0:
            raise ValueError(f"min_peak must be >= 0, got {self.min_peak}")


def _box_stats(values: np.ndarray, half: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell sum and count of the (2*half+1)^3 box, clipped at the edges."""
    n1, n2, n3 = values.shape
    table = np.zeros((n1 + 1, n2 + 1, n3 + 1))
    table[1:, 1:, 1:] = values.cumsum(0).cumsum(1).cumsum(2)
    lo, hi, length = [], [], []
    for n in values.shape:
        centers = np.arange(n)
        lo.append(np.clip(centers - half, 0, None))
        hi.append(np.clip(centers + half + 1, None, n))
        length.append(hi[-1] - lo[-1])
    sums = (table[np.ix_(hi[0], hi[1], hi[2])]
            - table[np.ix_(lo[0], hi[1], hi[2])]
            - table[np.ix_(hi[0], lo[1], hi[2])]
            - table[np.ix_(hi[0], hi[1], lo[2])]
            + table[np.ix_(lo[0], lo[1], hi[2])]
            + table[np.ix_(lo[0], hi[1], lo[2])]
            + table[np.ix_(hi[0], lo[1], lo[2])]
            - table[np.ix_(lo[0], lo[1], lo[2])])
    counts = np.einsum("i,j,k->ijk", length[0], length[1], length[2])
    return sums, counts


def cfar_extract(cube: RadarCube, cfg: CfarConfig) -> list[ReflectionPoint]:
    """Detect reflection points in a cube with cell-averaging CFAR.

    Returns detections at integer bins in row-major cell order with intensity
    equal to the cell value. An empty result is valid.
    """
    v = cube.values
    outer_sum, outer_cnt = _box_stats(v, cfg.guard + cfg.train)
    guard_sum, guard_cnt = _box_stats(v, cfg.guard)
    train_mean = (outer_sum - guard_sum) / (outer_cnt - guard_cnt)

    footprint = np.ones((3, 3, 3), dtype=bool)
    footprint[1, 1, 1] = False
    neighbor_max = maximum_filter(v, footprint=footprint,
                                  mode="constant", cval=-np.inf)
    detected = (v > cfg.alpha * train_mean) & (v > neighbor_max) & (v >= cfg.min_peak)
    return [ReflectionPoint(float(rb), float(db), float(ab),
                            float(v[rb, db, ab]), PointKind.SCENE)
            for rb, db, ab in np.argwhere(detected)]


@dataclass(frozen=True)
class FitResult:
    """Aggregated waveform fit: parameters, measured lobes, per-axis residuals."""

    params: WaveformParams
    lobes: LobeParams
    residuals: dict = field(default_factory=dict)
    peaks_used: int = 0


def _fit_gaussian_sigma(offsets: np.ndarray, slice_values: np.ndarray) -> tuple[float, float] | None:
    """Log-domain parabola fit on samples above 10% of the slice peak."""
    peak = slice_values.max()
    mask = slice_values > 0.1 * peak
    if mask.sum() < 3:
        return None
    x = offsets[mask].astype(np.float64)
    logy = np.log(slice_values[mask])
    coeffs = np.polyfit(x, logy, 2)
    if coeffs[0] >= 0:
        return None  # not peak-shaped; contaminated slice
    sigma = math.sqrt(-1.0 / (2.0 * coeffs[0]))
    residual = float(np.sqrt(np.mean((np.polyval(coeffs, x) - logy) ** 2)))
    return sigma, residual


def _fit_doppler_template(offsets: np.ndarray, slice_values: np.ndarray,
                          s_max: float) -> tuple[float, float, float] | None:
    """Least-squares fit of g * max{1-u, 2-4u, 0} over amplitude, scale, center.

    Coarse grid over (scale, center) with closed-form amplitude, then a local
    polish. Returns (g, s_doppler, rms residual).
    """
    x = offsets.astype(np.float64)
    y = slice_values.astype(np.float64)
    if y.max() <= 0:
        return None
    c_guess = float(x[np.argmax(y)])

    best = None
    for s in np.linspace(0.5, s_max, 36):
        for c in c_guess + np.linspace(-0.6, 0.6, 25):
            t = doppler_shape(x - c, 1.0, s)
            denom = float(t @ t)
            if denom == 0:
                continue
            g = max(float(y @ t) / denom, 0.0)
            err = float(np.sum((y - g * t) ** 2))
            if best is None or err < best[0]:
                best = (err, g, s, c)
    if best is None or best[1] <= 0:
        return None
    _, g0, s0, c0 = best

    def residual(theta):
        g, s, c = theta
        return y - doppler_shape(x - c, g, s)

    sol = optimize.least_squares(
        residual, x0=[g0, s0, c0],
        bounds=([1e-9, 0.25, c_guess - 1.0], [np.inf, s_max + 1.0, c_guess + 1.0]))
    refined = float(np.sum(sol.fun ** 2))
    if refined < best[0]:
        g0, s0 = float(sol.x[0]), float(sol.x[1])
        err = refined
    else:
        err = best[0]
    return g0, s0, float(math.sqrt(err / len(y)))


def isolated_peaks(peaks: list[ReflectionPoint], window_r: int,
                   window_d: int, reach_r: int = 0,
                   reach_d: int = 0) -> list[ReflectionPoint]:
    """Peaks whose fitting windows no other detection can leak energy into.

    A neighbor contaminates when it sits within the fitting window inflated by
    the kernel reach on the range and Doppler axes. Azimuth separation is
    ignored: the azimuth slice spans the whole axis, and two detections
    sharing a (range, doppler) neighborhood contaminate each other's slices
    regardless of azimuth distance.
    """
    out = []
    for i, p in enumerate(peaks):
        clean = True
        for j, q in enumerate(peaks):
            if i == j:
                continue
            if (abs(p.r_bin - q.r_bin) <= window_r + reach_r
                    and abs(p.d_bin - q.d_bin) <= window_d + reach_d):
                clean = False
                break
        if clean:
            out.append(p)
    return out


def fit_waveform_params(cube: RadarCube, peaks: list[ReflectionPoint],
                        pad_length: int | None = None, *,
                        sigma_max: float = 4.0, s_doppler_max: float = 4.0,
                        n_candidates=DEFAULT_N_CANDIDATES,
                        p_candidates=DEFAULT_P_CANDIDATES,
                        estimator: str = "median") -> FitResult:
    """Recover waveform parameters from 1D slices through isolated peaks.

    Per peak: sigma from a log-domain parabola fit of the range slice, (g,
    s_doppler) from a template fit of the Doppler slice, and (rs, lam)
    measured from the azimuth slice. Estimates aggregate across peaks with
    the median (or mean, via ``estimator``); the window length and taper are
    then matched to the aggregated lobes.

    The amplitude estimate for g assumes unit-intensity reflectors: the slice
    amplitude is the product of reflection intensity and g, so calibration
    scenes must use known intensities for g to be meaningful.
    """
    if estimator not in ("median", "mean"):
        raise ValueError(f"estimator must be 'median' or 'mean', got {estimator!r}")
    if pad_length is None:
        pad_length = cube.grid.n_azimuth

    window_r = math.ceil(4.0 * sigma_max)
    window_d = math.ceil(4.0 * s_doppler_max)
    ordered = sorted(peaks, key=lambda p: (p.r_bin, p.d_bin, p.a_bin))
    candidates = isolated_peaks(ordered, window_r, window_d,
                                reach_r=math.ceil(4.0 * sigma_max),
                                reach_d=math.ceil(s_doppler_max))

    v = cube.values
    n_r, n_d, n_a = cube.grid.shape
    sigmas, gs, scales, rs_list, lam_list = [], [], [], [], []
    res_range, res_doppler = [], []
    for p in candidates:
        r0 = int(round(p.r_bin))
        d0 = int(round(p.d_bin))
        a0 = int(round(p.a_bin))

        r_lo, r_hi = max(0, r0 - window_r), min(n_r, r0 + window_r + 1)
        range_slice = v[r_lo:r_hi, d0, a0]
        got = _fit_gaussian_sigma(np.arange(r_lo, r_hi) - r0, range_slice)
        if got is None:
            continue

        d_lo, d_hi = max(0, d0 - window_d), min(n_d, d0 + window_d + 1)
        doppler_slice = v[r0, d_lo:d_hi, a0]
        got_d = _fit_doppler_template(np.arange(d_lo, d_hi) - d0,
                                      doppler_slice, s_doppler_max)
        if got_d is None:
            continue

        azimuth_slice = v[r0, d0, :]
        try:
            rs, lam, _, _ = measure_lobes(azimuth_slice)
        except ValueError:
            continue
        if rs <= 0:
            continue

        sigmas.append(got[0])
        res_range.append(got[1])
        gs.append(got_d[0])
        scales.append(got_d[1])
        res_doppler.append(got_d[2])
        rs_list.append(rs)
        lam_list.append(lam)

    if not sigmas:
        raise ValueError("insufficient isolated peaks for waveform fitting")

    agg = np.median if estimator == "median" else np.mean
    lobes = LobeParams(rs=float(agg(rs_list)), lam=float(agg(lam_list)))
    n_window, p_window = fit_window_from_lobes(lobes, pad_length,
                                               n_candidates, p_candidates)
    params = WaveformParams(sigma=float(agg(sigmas)), g=float(agg(gs)),
                            n_window=n_window, p_window=p_window,
                            s_doppler=float(agg(scales)))
    fitted_lobes = derive_lobe_params(n_window, p_window, pad_length)
    residuals = {
        "range": float(agg(res_range)),
        "doppler": float(agg(res_doppler)),
        "azimuth": float(abs(fitted_lobes.rs - lobes.rs) / lobes.rs),
    }
    return FitResult(params=params, lobes=lobes, residuals=residuals,
                     peaks_used=len(sigmas))
