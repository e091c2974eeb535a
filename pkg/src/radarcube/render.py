"""Projection image rendering: deterministic grayscale PNGs plus annotated figures.

The grayscale path normalizes min-max to 8 bits and writes through Pillow, so
the same cube always produces byte-identical files. The annotated path draws
labeled matplotlib figures and is meant for human inspection, not byte
reproducibility.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .core import RadarCube
from .metrics import ra_projection, rd_projection


def to_grayscale(image: np.ndarray) -> np.ndarray:
    """Min-max normalize to uint8; a constant image maps to all black."""
    img = np.asarray(image, dtype=np.float64)
    vmin = img.min()
    vmax = img.max()
    if vmax <= vmin:
        return np.zeros(img.shape, dtype=np.uint8)
    scaled = (img - vmin) / (vmax - vmin)
    return np.floor(scaled * 255.0 + 0.5).astype(np.uint8)


def write_png(path: str | Path, gray: np.ndarray) -> None:
    Image.fromarray(gray, mode="L").save(str(path), format="PNG")


def render_projections(cube: RadarCube, out_prefix: str | Path) -> tuple[Path, Path]:
    """Write range-azimuth and range-Doppler max-projection PNGs.

    Rows are range bins; columns are azimuth or Doppler bins. Returns the two
    paths (``<prefix>_ra.png``, ``<prefix>_rd.png``).
    """
    prefix = Path(out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    ra_path = prefix.parent / (prefix.name + "_ra.png")
    rd_path = prefix.parent / (prefix.name + "_rd.png")
    write_png(ra_path, to_grayscale(ra_projection(cube)))
    write_png(rd_path, to_grayscale(rd_projection(cube)))
    return ra_path, rd_path


def render_annotated(cube: RadarCube, out_prefix: str | Path) -> tuple[Path, Path]:
    """Write labeled RA/RD heatmap figures with physical axes and colorbars."""
    from matplotlib.figure import Figure

    grid = cube.grid
    prefix = Path(out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    ra_path = prefix.parent / (prefix.name + "_ra_annotated.png")
    rd_path = prefix.parent / (prefix.name + "_rd_annotated.png")

    half_fov_deg = np.degrees(grid.azimuth_fov) / 2.0
    half_doppler = grid.doppler_resolution * grid.n_doppler / 2.0
    views = [
        (ra_path, ra_projection(cube), "azimuth [deg]",
         (-half_fov_deg, half_fov_deg)),
        (rd_path, rd_projection(cube), "radial velocity [m/s]",
         (-half_doppler, half_doppler)),
    ]
    for path, img, xlabel, (x_lo, x_hi) in views:
        fig = Figure(figsize=(6, 5), dpi=120)
        ax = fig.add_subplot(111)
        mesh = ax.imshow(img, origin="lower", aspect="auto", cmap="viridis",
                         extent=(x_lo, x_hi, 0.0, grid.max_range))
        ax.set_xlabel(xlabel)
        ax.set_ylabel("range [m]")
        ax.set_title(path.stem)
        fig.colorbar(mesh, ax=ax, label="intensity")
        fig.savefig(path, bbox_inches="tight")
    return ra_path, rd_path


def render_comparison(sim: RadarCube, gt: RadarCube, out_path: str | Path) -> Path:
    """Side-by-side RA projections of two cubes with their absolute difference."""
    from matplotlib.figure import Figure

    path = Path(out_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    images = [("simulated", ra_projection(sim)), ("reference", ra_projection(gt)),
              ("abs difference", np.abs(ra_projection(sim) - ra_projection(gt)))]
    fig = Figure(figsize=(14, 4.5), dpi=120)
    for i, (title, img) in enumerate(images, start=1):
        ax = fig.add_subplot(1, 3, i)
        mesh = ax.imshow(img, origin="lower", aspect="auto", cmap="viridis")
        ax.set_title(title)
        ax.set_xlabel("azimuth bin")
        if i == 1:
            ax.set_ylabel("range bin")
        fig.colorbar(mesh, ax=ax)
    fig.savefig(path, bbox_inches="tight")
    return path
