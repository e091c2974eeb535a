import numpy as np

from radarcube import RadarCube, RadarGrid, render_projections
from radarcube.render import render_annotated, to_grayscale

GRID = RadarGrid(16, 8, 12, 0.5, 0.1, 1.0)


def test_zero_cube_renders_black(tmp_path):
    ra, rd = render_projections(RadarCube.zeros(GRID), tmp_path / "img")
    from PIL import Image
    for path, shape in ((ra, (16, 12)), (rd, (16, 8))):
        img = np.asarray(Image.open(path))
        assert img.shape == shape
        assert img.max() == 0


def test_single_hot_cell_is_single_white_pixel(tmp_path):
    values = np.zeros(GRID.shape)
    values[3, 2, 7] = 4.2
    ra, rd = render_projections(RadarCube(GRID, values), tmp_path / "img")
    from PIL import Image
    ra_img = np.asarray(Image.open(ra))
    rd_img = np.asarray(Image.open(rd))
    assert ra_img[3, 7] == 255 and ra_img.sum() == 255
    assert rd_img[3, 2] == 255 and rd_img.sum() == 255


def test_same_cube_gives_identical_bytes(tmp_path):
    rng = np.random.default_rng(0)
    cube = RadarCube(GRID, rng.uniform(0, 1, GRID.shape))
    ra1, rd1 = render_projections(cube, tmp_path / "one")
    ra2, rd2 = render_projections(cube, tmp_path / "two")
    assert ra1.read_bytes() == ra2.read_bytes()
    assert rd1.read_bytes() == rd2.read_bytes()


def test_grayscale_normalization():
    img = np.array([[0.0, 1.0], [2.0, 4.0]])
    gray = to_grayscale(img)
    assert gray.dtype == np.uint8
    assert gray[0, 0] == 0 and gray[1, 1] == 255
    assert gray[0, 1] == round(255 / 4)


def test_annotated_figures_written(tmp_path):
    rng = np.random.default_rng(1)
    cube = RadarCube(GRID, rng.uniform(0, 1, GRID.shape))
    ra, rd = render_annotated(cube, tmp_path / "fig")
    assert ra.exists() and ra.stat().st_size > 0
    assert rd.exists() and rd.stat().st_size > 0
