"""Per-axis slice profiles of the single-reflector response and separable kernels.

The cube response of one reflector factors into three 1D profiles: a Gaussian
along range, a segmented-linear ramp along Doppler, and the magnitude spectrum
of a raised-cosine window along azimuth. Kernels are truncated to compact
support so synthesis can work on bounded tap lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import LobeParams, RadarGrid, WaveformParams

# Azimuth taps below this fraction of the kernel peak are dropped.
AZIMUTH_TAP_CUTOFF = 1e-4


def gaussian_shape(x: np.ndarray | float, sigma: float) -> np.ndarray | float:
    return np.exp(-(np.asarray(x, dtype=np.float64) ** 2) / (2.0 * sigma * sigma))


def doppler_shape(x: np.ndarray | float, g: float, s_doppler: float) -> np.ndarray:
    """g * max{1 - u, 2 - 4u, 0} with u = |x| / s_doppler.

    Peak value 2g at u = 0; the two linear pieces cross at u = 1/3 with value
    (2/3) g; support ends at u = 1.
    """
    u = np.abs(np.asarray(x, dtype=np.float64)) / s_doppler
    return g * np.maximum(np.maximum(1.0 - u, 2.0 - 4.0 * u), 0.0)


def eval_range_profile(sigma: float, center: float, offsets) -> np.ndarray:
    """Gaussian range slice exp(-(r - center)^2 / (2 sigma^2)) at the offsets."""
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    return gaussian_shape(np.asarray(offsets, dtype=np.float64) - center, sigma)


def eval_doppler_profile(g: float, s_doppler: float, center: float, offsets) -> np.ndarray:
    """Segmented-linear Doppler slice at the offsets (see :func:`doppler_shape`)."""
    if g <= 0:
        raise ValueError(f"g must be > 0, got {g}")
    if s_doppler <= 0:
        raise ValueError(f"s_doppler must be > 0, got {s_doppler}")
    return doppler_shape(np.asarray(offsets, dtype=np.float64) - center, g, s_doppler)


def window_samples(n_window: int, p_window: float) -> np.ndarray:
    """Raised-cosine window w[n] = (1 - p) - p cos(2 pi n / (N - 1)), n = 0..N-1."""
    if n_window < 3:
        raise ValueError(f"n_window must be >= 3, got {n_window}")
    if not 0 <= p_window < 1:
        raise ValueError(f"p_window must be in [0, 1), got {p_window}")
    n = np.arange(n_window, dtype=np.float64)
    return (1.0 - p_window) - p_window * np.cos(2.0 * math.pi * n / (n_window - 1))


def azimuth_base_spectrum(n_window: int, p_window: float, pad_length: int) -> np.ndarray:
    """Normalized window spectrum magnitude, peak 1 at index pad_length // 2.

    The window is zero-padded to ``pad_length`` before the transform so the
    spectrum is sampled on the azimuth bin lattice, then fft-shifted and
    scaled to unit peak.
    """
    if pad_length < n_window:
        raise ValueError(f"pad_length {pad_length} < n_window {n_window}")
    w = window_samples(n_window, p_window)
    spectrum = np.abs(np.fft.fft(w, n=pad_length))
    spectrum = np.fft.fftshift(spectrum)
    return spectrum / spectrum.max()


def linear_resample(table: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Linearly interpolate ``table`` at fractional ``positions``; outside -> 0."""
    pos = np.asarray(positions, dtype=np.float64)
    k = np.floor(pos).astype(np.int64)
    t = pos - k
    n = len(table)
    v0 = np.where((k >= 0) & (k < n), table[np.clip(k, 0, n - 1)], 0.0)
    k1 = k + 1
    v1 = np.where((k1 >= 0) & (k1 < n), table[np.clip(k1, 0, n - 1)], 0.0)
    return (1.0 - t) * v0 + t * v1


def eval_azimuth_profile(n_window: int, p_window: float, pad_length: int,
                         center: float) -> np.ndarray:
    """Azimuth slice of length ``pad_length`` with its peak at ``center``.

    Fractional centers are realized by linear interpolation of the base
    spectrum; samples shifted past the array edges are truncated to zero, not
    wrapped.
    """
    table = azimuth_base_spectrum(n_window, p_window, pad_length)
    c0 = pad_length // 2
    positions = np.arange(pad_length, dtype=np.float64) - center + c0
    return linear_resample(table, positions)


def measure_lobes(profile: np.ndarray) -> tuple[float, float, int, int]:
    """Main-lobe width and peak sidelobe ratio of a sampled beam profile.

    Returns (rs, lam, left_min, right_min): rs is the bin distance between the
    first local minima flanking the global peak; lam is the largest local
    maximum outside [left_min, right_min] divided by the peak value (0 when no
    sidelobe exists). Minima scans stop at the array edges.
    """
    y = np.asarray(profile, dtype=np.float64)
    if y.ndim != 1 or len(y) < 3:
        raise ValueError("profile must be 1D with at least 3 samples")
    peak = int(np.argmax(y))
    peak_val = y[peak]
    if peak_val <= 0:
        raise ValueError("profile peak must be positive")

    right = peak
    while right + 1 < len(y) and y[right + 1] < y[right]:
        right += 1
    left = peak
    while left - 1 >= 0 and y[left - 1] < y[left]:
        left -= 1

    lam = 0.0
    for lo, hi in ((1, left), (right + 1, len(y) - 1)):
        for i in range(lo, hi):
            if y[i] >= y[i - 1] and y[i] >= y[i + 1] and (y[i] > y[i - 1] or y[i] > y[i + 1]):
                lam = max(lam, y[i] / peak_val)
    return float(right - left), min(lam, np.nextafter(1.0, 0.0)), left, right


def derive_lobe_params(n_window: int, p_window: float, pad_length: int) -> LobeParams:
    """Main-lobe width and sidelobe ratio of the normalized window spectrum."""
    rs, lam, _, _ = measure_lobes(azimuth_base_spectrum(n_window, p_window, pad_length))
    return LobeParams(rs=rs, lam=lam)


def fit_window_from_lobes(target: LobeParams, pad_length: int,
                          n_candidates, p_candidates) -> tuple[int, float]:
    """Window length and taper whose spectrum best matches the target lobes.

    Grid search minimizing the squared relative error of (rs, lam); the lam
    term falls back to absolute error when the target has no sidelobe. Ties
    break toward smaller N, then smaller p.
    """
    n_list = sorted({int(n) for n in n_candidates})
    p_list = sorted({float(p) for p in p_candidates})
    if not n_list or not p_list:
        raise ValueError("candidate ranges must be non-empty")
    best: tuple[int, float] | None = None
    best_err = math.inf
    for n in n_list:
        for p in p_list:
            cand = derive_lobe_params(n, p, pad_length)
            err = ((cand.rs - target.rs) / target.rs) ** 2
            if target.lam > 0:
                err += ((cand.lam - target.lam) / target.lam) ** 2
            else:
                err += cand.lam ** 2
            if err < best_err:
                best_err = err
                best = (n, p)
    assert best is not None
    return best


@dataclass(frozen=True)
class SeparableKernel:
    """Truncated separable response: the full kernel is the outer product of
    the three tap lists, shifted by the baked-in sub-bin offsets."""

    range_offsets: np.ndarray     # integer bin offsets
    range_weights: np.ndarray
    doppler_offsets: np.ndarray
    doppler_weights: np.ndarray
    azimuth_offsets: np.ndarray
    azimuth_weights: np.ndarray
    center_phase: tuple[float, float, float]  # (dr, dd, da) sub-bin shifts

    def __post_init__(self) -> None:
        for name in ("range", "doppler", "azimuth"):
            w = getattr(self, f"{name}_weights")
            o = getattr(self, f"{name}_offsets")
            if len(w) == 0 or len(w) != len(o):
                raise ValueError(f"{name} taps must be non-empty and aligned")
            if not np.all(np.isfinite(w)) or w.min() < 0:
                raise ValueError(f"{name} weights must be finite and >= 0")

    def dense(self) -> np.ndarray:
        """Outer product of the tap weights (for tests and small scenes)."""
        return np.einsum("i,j,k->ijk", self.range_weights,
                         self.doppler_weights, self.azimuth_weights)


def psf_kernel(params: WaveformParams, grid: RadarGrid,
               frac_offsets: tuple[float, float, float] = (0.0, 0.0, 0.0),
               ) -> SeparableKernel:
    """Build the truncated separable kernel for one reflector.

    Range taps cover +/- ceil(4 sigma) bins, Doppler taps +/- ceil(s_doppler)
    bins, azimuth taps the spectrum padded to the full azimuth axis with
    weights below ``AZIMUTH_TAP_CUTOFF`` of the peak dropped. The fractional
    offsets shift each profile before sampling at integer taps.
    """
    dr, dd, da = frac_offsets
    r_radius = math.ceil(4.0 * params.sigma)
    r_off = np.arange(-r_radius, r_radius + 1, dtype=np.int64)
    r_w = eval_range_profile(params.sigma, dr, r_off)

    d_radius = math.ceil(params.s_doppler)
    d_off = np.arange(-d_radius, d_radius + 1, dtype=np.int64)
    d_w = eval_doppler_profile(params.g, params.s_doppler, dd, d_off)

    pad = grid.n_azimuth
    if pad < params.n_window:
        raise ValueError(f"azimuth axis ({pad}) shorter than window ({params.n_window})")
    c0 = pad // 2
    table = azimuth_base_spectrum(params.n_window, params.p_window, pad)
    # One extra tap each side: a fractionally shifted length-pad table spans
    # pad + 2 integer lattice points.
    a_off = np.arange(-c0 - 1, pad - c0 + 1, dtype=np.int64)
    profile = linear_resample(table, a_off - da + c0)
    # The table peak is normalized to 1, so the cutoff is absolute.
    keep = profile >= AZIMUTH_TAP_CUTOFF
    return SeparableKernel(
        range_offsets=r_off, range_weights=r_w,
        doppler_offsets=d_off, doppler_weights=d_w,
        azimuth_offsets=a_off[keep], azimuth_weights=profile[keep],
        center_phase=(dr, dd, da))
