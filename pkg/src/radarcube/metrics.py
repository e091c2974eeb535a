"""Quantitative comparison of simulated and reference cubes.

Per-cell error (global and scene-restricted), spectral error over the 3D
discrete Fourier transform, max-projection images, and a Frechet distance on
fixed block-mean pixel statistics of projection image sets. The Frechet
feature map is a plain 16x16 block mean, not a learned embedding, so its
values are only comparable to themselves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .core import RadarCube, ScenePointSet

FRECHET_BLOCKS = 16


def _check_same_shape(sim: RadarCube, gt: RadarCube) -> None:
    if sim.grid.shape != gt.grid.shape:
        raise ValueError(f"cube dims differ: {sim.grid.shape} vs {gt.grid.shape}")


def ppe(sim: RadarCube, gt: RadarCube) -> float:
    """Mean absolute per-cell difference."""
    _check_same_shape(sim, gt)
    return float(np.mean(np.abs(sim.values - gt.values)))


def ppe_scene(sim: RadarCube, gt: RadarCube, scene: ScenePointSet,
              reduction: str = "mean") -> float:
    """Absolute difference restricted to the scene bins (mean, or sum)."""
    _check_same_shape(sim, gt)
    if len(scene) == 0:
        raise ValueError("scene point set is empty")
    idx = scene.indices
    for axis, n in enumerate(sim.grid.shape):
        if idx[:, axis].max() >= n:
            raise ValueError(f"scene bin out of bounds on axis {axis}")
    diffs = np.abs(sim.values[idx[:, 0], idx[:, 1], idx[:, 2]]
                   - gt.values[idx[:, 0], idx[:, 1], idx[:, 2]])
    if reduction == "mean":
        return float(diffs.mean())
    if reduction == "sum":
        return float(diffs.sum())
    raise ValueError(f"reduction must be 'mean' or 'sum', got {reduction!r}")


def ppse(sim: RadarCube, gt: RadarCube) -> float:
    """Mean magnitude of the per-coefficient spectral difference.

    Both cubes go through the unnormalized forward 3D transform; the metric
    is the mean of |F(sim) - F(gt)|. Worker count (scipy.fft.set_workers)
    does not change the result.
    """
    _check_same_shape(sim, gt)
    return float(np.mean(np.abs(scipy.fft.fftn(sim.values) - scipy.fft.fftn(gt.values))))


def ra_projection(cube: RadarCube) -> np.ndarray:
    """Range-azimuth image: elementwise max over the Doppler axis."""
    return cube.values.max(axis=1)


def rd_projection(cube: RadarCube) -> np.ndarray:
    """Range-Doppler image: elementwise max over the azimuth axis."""
    return cube.values.max(axis=2)


def _block_mean_features(image: np.ndarray) -> np.ndarray:
    """Block-mean pooling to at most 16x16, flattened.

    Axes shorter than 16 keep their native length so small grids still
    produce a well-defined (smaller) feature vector.
    """
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"expected 2D image, got shape {img.shape}")
    out = img
    for axis in (0, 1):
        n = out.shape[axis]
        blocks = min(FRECHET_BLOCKS, n)
        edges = np.linspace(0, n, blocks + 1).astype(int)
        sums = np.add.reduceat(out, edges[:-1], axis=axis)
        counts = np.diff(edges)
        shape = [1, 1]
        shape[axis] = blocks
        out = sums / counts.reshape(shape)
    return out.ravel()


def _gaussian_stats(images: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    feats = np.stack([_block_mean_features(img) for img in images])
    return feats.mean(axis=0), np.cov(feats, rowvar=False)


def frechet_stats_distance(images_a: list[np.ndarray],
                           images_b: list[np.ndarray]) -> float:
    """Frechet distance between the Gaussian moments of two image sets.

    ||mu_a - mu_b||^2 + Tr(S_a + S_b - 2 (S_a S_b)^(1/2)), with the matrix
    square root taken through a symmetric eigendecomposition and negative
    eigenvalues clamped to zero for near-singular covariances.
    """
    if len(images_a) < 2 or len(images_b) < 2:
        raise ValueError("each image set needs at least 2 images")
    shapes = {img.shape for img in list(images_a) + list(images_b)}
    if len(shapes) != 1:
        raise ValueError(f"all images must share one shape, got {sorted(shapes)}")
    mu_a, cov_a = _gaussian_stats(images_a)
    mu_b, cov_b = _gaussian_stats(images_b)

    vals_a, vecs_a = np.linalg.eigh(cov_a)
    root_a = (vecs_a * np.sqrt(np.clip(vals_a, 0.0, None))) @ vecs_a.T
    inner = root_a @ cov_b @ root_a
    cross_vals = np.linalg.eigvalsh((inner + inner.T) / 2.0)
    trace_cross = np.sqrt(np.clip(cross_vals, 0.0, None)).sum()

    dist = (np.sum((mu_a - mu_b) ** 2)
            + np.trace(cov_a) + np.trace(cov_b) - 2.0 * trace_cross)
    return float(max(dist, 0.0))


@dataclass(frozen=True)
class MetricReport:
    """Bundle of cube comparison metrics with the cell counts they cover."""

    ppe: float
    ppse: float
    n_cells: int
    ppe_scene: float | None = None
    ppe_scene_sum: float | None = None
    n_scene_cells: int = 0
    frechet: float | None = None

    def to_dict(self) -> dict:
        return {
            "ppe": self.ppe,
            "ppe_scene": self.ppe_scene,
            "ppe_scene_sum": self.ppe_scene_sum,
            "ppse": self.ppse,
            "frechet": self.frechet,
            "counts": {"cells": self.n_cells, "scene_cells": self.n_scene_cells},
        }


def metric_report(sim: RadarCube, gt: RadarCube,
                  scene: ScenePointSet | None = None,
                  frechet: float | None = None) -> MetricReport:
    """Compute the standard metric bundle for a simulated/reference cube pair."""
    report = MetricReport(
        ppe=ppe(sim, gt),
        ppse=ppse(sim, gt),
        n_cells=int(np.prod(sim.grid.shape)),
        ppe_scene=ppe_scene(sim, gt, scene) if scene is not None and len(scene) else None,
        ppe_scene_sum=(ppe_scene(sim, gt, scene, reduction="sum")
                       if scene is not None and len(scene) else None),
        n_scene_cells=len(scene) if scene is not None else 0,
        frechet=frechet,
    )
    return report
