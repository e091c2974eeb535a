"""Scene edits: attribute changes, sensor relocation, and actor removal.

Edits operate on point and actor lists, never on cube pixels; the edited cube
is always produced by re-synthesizing from the modified inputs.
"""

from __future__ import annotations

from dataclasses import replace

from .core import (ActorPoint, PointKind, RadarCube, RadarGrid, ReflectionPoint,
                   SensorPose, WaveformParams)
from .synthesis import NoiseConfig, synthesize_fast, synthesize_scene


def modify_attributes(points: list[ReflectionPoint], new_params: WaveformParams,
                      grid: RadarGrid) -> RadarCube:
    """Re-synthesize the same reflection points under new waveform parameters."""
    return synthesize_fast(points, new_params, grid)


def translate_sensor(actors: list[ActorPoint], old_pose: SensorPose,
                     new_pose: SensorPose, grid: RadarGrid,
                     params: WaveformParams, noise_cfg: NoiseConfig,
                     intensity_scale: float | None = None) -> RadarCube:
    """Re-simulate the scene from a new sensor pose.

    Range, azimuth, and Doppler bins are all recomputed from the new geometry
    and the actor velocities; noise is resampled from the config seed.
    ``old_pose`` records the edit origin and does not affect the output: with
    ``new_pose == old_pose`` and the same seed, the cube is bit-identical to
    the original simulation.
    """
    del old_pose
    cube, _, _ = synthesize_scene(actors, new_pose, grid, params, noise_cfg,
                                  intensity_scale)
    return cube


def remove_actor(points: list[ReflectionPoint], actor_id: int,
                 noise_floor: float) -> list[ReflectionPoint]:
    """Demote one actor's points to noise at a floor intensity.

    List length and order are preserved so edited scenes stay diffable
    against the original. Unknown ids are an error listing the known ones.
    """
    if noise_floor < 0:
        raise ValueError(f"noise_floor must be >= 0, got {noise_floor}")
    known = sorted({p.actor_id for p in points if p.actor_id is not None})
    if actor_id not in known:
        raise ValueError(f"unknown actor_id {actor_id}; known ids: {known}")
    return [replace(p, intensity=noise_floor, kind=PointKind.NOISE, actor_id=None)
            if p.actor_id == actor_id else p
            for p in points]
