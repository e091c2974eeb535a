import math

import numpy as np
import pytest

from radarcube import (CfarConfig, NoiseConfig, PointKind, RadarCube, RadarGrid,
                       ReflectionPoint, WaveformParams, cfar_extract,
                       default_noise_config, fit_waveform_params,
                       sample_noise_points, synthesize_fast)
from radarcube.dataset import calibration_scene

FULL_GRID = RadarGrid(256, 64, 256, 0.1953125, 0.13, math.pi / 2)
FIT_CFAR = CfarConfig(guard=2, train=4, alpha=4.0, min_peak=0.45)


class TestCfar:
    def grid(self):
        return RadarGrid(32, 16, 32, 0.2, 0.13, math.pi / 2)

    def test_constant_cube_no_detections(self):
        grid = self.grid()
        cube = RadarCube(grid, np.full(grid.shape, 3.0))
        assert cfar_extract(cube, CfarConfig(alpha=1.5)) == []

    def test_single_hot_cell(self):
        grid = self.grid()
        values = np.zeros(grid.shape)
        values[10, 8, 12] = 10.0
        cube = RadarCube(grid, values)
        # training shell around the hot cell is all zero, so its mean is 0 and
        # any alpha passes; every other cell fails the strict-local-max test
        dets = cfar_extract(cube, CfarConfig(guard=1, train=2, alpha=5.0))
        assert len(dets) == 1
        assert (dets[0].r_bin, dets[0].d_bin, dets[0].a_bin) == (10.0, 8.0, 12.0)
        assert dets[0].intensity == 10.0
        assert dets[0].kind is PointKind.SCENE

    def test_scale_equivariance(self):
        grid = self.grid()
        rng = np.random.default_rng(2)
        base = rng.gamma(1.0, 1.0, grid.shape)
        base[5, 5, 5] = 60.0
        base[20, 10, 25] = 45.0
        cfg = CfarConfig(guard=1, train=3, alpha=6.0, min_peak=2.0)
        for c in (0.5, 3.0, 250.0):
            scaled = cfar_extract(RadarCube(grid, c * base),
                                  CfarConfig(guard=1, train=3, alpha=6.0,
                                             min_peak=2.0 * c))
            ref = cfar_extract(RadarCube(grid, base), cfg)
            assert [(p.r_bin, p.d_bin, p.a_bin) for p in scaled] == \
                   [(p.r_bin, p.d_bin, p.a_bin) for p in ref]

    def test_detections_are_strict_local_maxima(self):
        grid = self.grid()
        rng = np.random.default_rng(4)
        values = rng.gamma(0.5, 1.0, grid.shape)
        cube = RadarCube(grid, values)
        for det in cfar_extract(cube, CfarConfig(guard=1, train=2, alpha=1.2)):
            r, d, a = int(det.r_bin), int(det.d_bin), int(det.a_bin)
            neigh = values[max(r - 1, 0):r + 2, max(d - 1, 0):d + 2,
                           max(a - 1, 0):a + 2]
            assert values[r, d, a] == neigh.max()
            assert (neigh == values[r, d, a]).sum() == 1

    def test_min_peak_floor(self):
        grid = self.grid()
        values = np.zeros(grid.shape)
        values[10, 8, 12] = 10.0
        values[22, 4, 5] = 0.5
        cube = RadarCube(grid, values)
        dets = cfar_extract(cube, CfarConfig(guard=1, train=2, alpha=2.0, min_peak=1.0))
        assert len(dets) == 1 and dets[0].intensity == 10.0

    def test_config_validation(self):
        with pytest.raises(ValueError):
            CfarConfig(guard=-1)
        with pytest.raises(ValueError):
            CfarConfig(train=0)
        with pytest.raises(ValueError):
            CfarConfig(alpha=0.0)


def separated_scene(rng, grid, count=20, noise_ceiling=0.05):
    """Points on a coarse (range, doppler) lattice, at >= 20x the noise ceiling."""
    r_slots = np.arange(20, grid.n_range - 16, 32)
    d_slots = np.arange(8, grid.n_doppler - 8, 8)
    lattice = [(r, d) for r in r_slots for d in d_slots]
    picks = rng.choice(len(lattice), size=count, replace=False)
    points = []
    for j in picks:
        r, d = lattice[j]
        points.append(ReflectionPoint(
            r + rng.uniform(-0.4, 0.4), d + rng.uniform(-0.4, 0.4),
            rng.uniform(20, grid.n_azimuth - 20),
            rng.uniform(1.0, 1.5) * 20 * noise_ceiling, PointKind.SCENE, int(j)))
    return points


def match_detections(detections, truths):
    """Greedy one-to-one matching within 1 bin per axis; returns (tp, fp, fn)."""
    unmatched = set(range(len(truths)))
    tp = fp = 0
    for det in detections:
        hit = None
        for idx in unmatched:
            t = truths[idx]
            if (abs(det.r_bin - t.r_bin) <= 1 and abs(det.d_bin - t.d_bin) <= 1
                    and abs(det.a_bin - t.a_bin) <= 1):
                hit = idx
                break
        if hit is None:
            fp += 1
        else:
            unmatched.discard(hit)
            tp += 1
    return tp, fp, len(unmatched)


def test_cfar_roundtrip_single_seed():
    params = WaveformParams(sigma=2.6, g=0.6, n_window=8, p_window=0.3, s_doppler=2.0)
    rng = np.random.default_rng(0)
    truths = separated_scene(rng, FULL_GRID)
    noise = sample_noise_points(FULL_GRID, NoiseConfig(2000, 0.001, 0.05, seed=0))
    cube = synthesize_fast(truths + noise, params, FULL_GRID)
    dets = cfar_extract(cube, CfarConfig(guard=3, train=6, alpha=3.0, min_peak=0.7))
    tp, fp, fn = match_detections(dets, truths)
    assert tp / (tp + fn) >= 0.95
    assert tp / (tp + fp) >= 0.90


class TestFitRoundtrip:
    def synth_calibration(self, params, grid, noise_cfg=None, seed=42, n_points=5):
        pts = calibration_scene(grid, np.random.default_rng(seed),
                                params.s_doppler, points_per_scene=n_points)
        if noise_cfg is not None:
            pts = pts + sample_noise_points(grid, noise_cfg)
        return pts, synthesize_fast(pts, params, grid)

    def test_noiseless_reference_point(self):
        params = WaveformParams(sigma=2.6, g=0.6, n_window=8, p_window=0.1, s_doppler=2.0)
        _, cube = self.synth_calibration(params, FULL_GRID)
        fit = fit_waveform_params(cube, cfar_extract(cube, FIT_CFAR))
        assert fit.peaks_used == 5
        assert fit.params.n_window == 8
        assert fit.params.p_window == pytest.approx(0.1, abs=1e-12)
        assert abs(fit.params.sigma - 2.6) <= 0.05
        assert abs(fit.params.g - 0.6) <= 0.02
        assert abs(fit.params.s_doppler - 2.0) <= 0.1

    def test_noiseless_other_grid_point(self):
        params = WaveformParams(sigma=2.4, g=0.5, n_window=10, p_window=0.3, s_doppler=2.0)
        _, cube = self.synth_calibration(params, FULL_GRID)
        fit = fit_waveform_params(cube, cfar_extract(cube, FIT_CFAR))
        assert fit.params.n_window == 10
        assert fit.params.p_window == pytest.approx(0.3, abs=1e-12)
        assert abs(fit.params.sigma - 2.4) <= 0.05
        assert abs(fit.params.g - 0.5) <= 0.02

    def test_noisy_sigma_tolerance(self):
        params = WaveformParams(sigma=2.6, g=0.6, n_window=8, p_window=0.1, s_doppler=2.0)
        scene = calibration_scene(FULL_GRID, np.random.default_rng(42), 2.0,
                                  points_per_scene=5)
        noise = sample_noise_points(FULL_GRID, default_noise_config(scene, seed=5))
        cube = synthesize_fast(scene + noise, params, FULL_GRID)
        fit = fit_waveform_params(cube, cfar_extract(cube, FIT_CFAR))
        assert abs(fit.params.sigma - 2.6) <= 0.15

    def test_insufficient_isolated_peaks(self, small_grid, default_params):
        # two peaks inside one fitting window contaminate each other
        pts = [ReflectionPoint(30.0, 8.0, 20.0, 1.0, PointKind.SCENE),
               ReflectionPoint(34.0, 8.0, 44.0, 1.0, PointKind.SCENE)]
        cube = synthesize_fast(pts, default_params, small_grid)
        peaks = cfar_extract(cube, CfarConfig(guard=2, train=4, alpha=3.0, min_peak=0.45))
        assert len(peaks) >= 2
        with pytest.raises(ValueError, match="insufficient isolated peaks"):
            fit_waveform_params(cube, peaks)

    def test_mean_estimator_close_to_median(self):
        params = WaveformParams(sigma=2.5, g=0.7, n_window=7, p_window=0.2, s_doppler=2.0)
        grid = RadarGrid(128, 32, 128, 0.2, 0.13, math.pi / 2)
        _, cube = self.synth_calibration(params, grid, n_points=4)
        peaks = cfar_extract(cube, FIT_CFAR)
        med = fit_waveform_params(cube, peaks, estimator="median")
        mean = fit_waveform_params(cube, peaks, estimator="mean")
        assert abs(med.params.sigma - mean.params.sigma) < 0.01
        assert med.params.n_window == mean.params.n_window

    def test_residuals_near_zero_noiseless(self):
        params = WaveformParams(sigma=2.6, g=0.6, n_window=8, p_window=0.1, s_doppler=2.0)
        grid = RadarGrid(128, 32, 128, 0.2, 0.13, math.pi / 2)
        _, cube = self.synth_calibration(params, grid, n_points=4)
        fit = fit_waveform_params(cube, cfar_extract(cube, FIT_CFAR))
        assert fit.residuals["range"] < 1e-6
        assert fit.residuals["doppler"] < 1e-6
