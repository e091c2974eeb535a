import math

import numpy as np
import pytest

from radarcube import PointKind, RadarGrid, ReflectionPoint, WaveformParams


@pytest.fixture
def small_grid():
    return RadarGrid(64, 16, 64, 0.2, 0.13, math.pi / 2)


@pytest.fixture
def full_grid():
    return RadarGrid(256, 64, 256, 0.1953125, 0.13, math.pi / 2)


@pytest.fixture
def default_params():
    return WaveformParams(sigma=2.6, g=0.6, n_window=8, p_window=0.1, s_doppler=2.0)


def random_points(rng, grid, count, imin=0.1, imax=2.0, kind=PointKind.NOISE):
    return [ReflectionPoint(float(rng.uniform(0, grid.n_range)),
                            float(rng.uniform(0, grid.n_doppler)),
                            float(rng.uniform(0, grid.n_azimuth)),
                            float(rng.uniform(imin, imax)), kind)
            for _ in range(count)]


def rel_frobenius(a: np.ndarray, b: np.ndarray) -> float:
    ref = np.linalg.norm(b)
    if ref == 0:
        return float(np.linalg.norm(a - b))
    return float(np.linalg.norm(a - b) / ref)
