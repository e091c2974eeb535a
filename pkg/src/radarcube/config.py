"""Flat key = value configuration files.

Grammar: one ``key = value`` pair per line, ``#`` starts a comment, blank
lines ignored. Values are parsed to the type of the matching default; unknown
keys are errors. Command-line flags override config values, which override
the defaults below.
"""

from __future__ import annotations

import math
from pathlib import Path

DEFAULTS: dict[str, float | int] = {
    # grid
    "n_range": 256,
    "n_doppler": 64,
    "n_azimuth": 256,
    "range_resolution": 0.1953125,   # 50 m / 256 bins
    "doppler_resolution": 0.13,
    "azimuth_fov": math.pi / 2,
    # waveform
    "sigma": 2.6,
    "g": 0.6,
    "n_window": 8,
    "p_window": 0.1,
    "s_doppler": 2.0,
    # projection
    "intensity_scale": 1.0e4,
    # noise
    "noise_count": 2000,
    "noise_intensity_min": 0.001,
    "noise_intensity_max": 0.05,
    # CFAR
    "cfar_guard": 2,
    "cfar_train": 4,
    "cfar_alpha": 4.0,
    "cfar_min_peak": 0.0,
}


def parse_config(path: str | Path) -> dict:
    """Parse a config file into a dict of typed values."""
    values: dict[str, float | int] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in DEFAULTS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = int(raw) if isinstance(DEFAULTS[key], int) else float(raw)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad value for {key!r}: {raw!r}") from exc
    return values


def merged_config(config_path: str | Path | None, overrides: dict) -> dict:
    """DEFAULTS, then the config file, then non-None overrides."""
    merged = dict(DEFAULTS)
    if config_path is not None:
        merged.update(parse_config(config_path))
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return merged
