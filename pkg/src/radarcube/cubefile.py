"""Minimal binary container for radar cubes.

Layout (little-endian): 4-byte magic ``RADC``, uint16 version (1), three
uint32 bin counts (range, doppler, azimuth), uint8 dtype code (0 = float32),
then the payload row-major with range outermost and azimuth innermost. The
header carries bin geometry only; physical resolutions live in configuration.

In-memory cubes hold float64; writing rounds once to float32. Reading back a
written file and writing it again is byte-identical.
"""

from __future__ import annotations

import math
import struct
from pathlib import Path

import numpy as np

from .core import RadarCube, RadarGrid

MAGIC = b"RADC"
VERSION = 1
DTYPE_F32 = 0
_HEADER = struct.Struct("<4sHIIIB")


class CubeFormatError(ValueError):
    """Raised for malformed cube files."""


def write_cube(path: str | Path, cube: RadarCube) -> None:
    n_r, n_d, n_a = cube.grid.shape
    header = _HEADER.pack(MAGIC, VERSION, n_r, n_d, n_a, DTYPE_F32)
    payload = np.ascontiguousarray(cube.values, dtype="<f4").tobytes()
    Path(path).write_bytes(header + payload)


def read_cube(path: str | Path, grid: RadarGrid | None = None) -> RadarCube:
    """Read a cube file; pass ``grid`` to attach physical resolutions.

    Without a grid, unit resolutions and a pi field of view are assumed (the
    file format does not store them). A supplied grid must match the stored
    bin counts.
    """
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise CubeFormatError(f"{path}: truncated header ({len(raw)} bytes)")
    magic, version, n_r, n_d, n_a, dtype_code = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CubeFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CubeFormatError(f"{path}: unsupported version {version}")
    if dtype_code != DTYPE_F32:
        raise CubeFormatError(f"{path}: unsupported dtype code {dtype_code}")
    expected = n_r * n_d * n_a * 4
    payload = raw[_HEADER.size:]
    if len(payload) < expected:
        raise CubeFormatError(
            f"{path}: truncated payload ({len(payload)} of {expected} bytes)")
    if len(payload) > expected:
        raise CubeFormatError(
            f"{path}: trailing bytes ({len(payload) - expected}) after payload")
    values = np.frombuffer(payload, dtype="<f4").astype(np.float64)
    if not np.all(np.isfinite(values)):
        raise CubeFormatError(f"{path}: non-finite value in payload")
    values = values.reshape(n_r, n_d, n_a)
    if grid is None:
        grid = RadarGrid(int(n_r), int(n_d), int(n_a),
                         range_resolution=1.0, doppler_resolution=1.0,
                         azimuth_fov=math.pi)
    elif grid.shape != (n_r, n_d, n_a):
        raise CubeFormatError(
            f"{path}: stored dims {(n_r, n_d, n_a)} do not match grid {grid.shape}")
    return RadarCube(grid, values)
