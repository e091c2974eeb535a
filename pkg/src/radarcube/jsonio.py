"""JSON serialization for scenes, points, parameters, edit scripts, and reports.

Schemas are documented in docs/formats.md. Floats round-trip exactly through
their shortest-repr JSON encoding.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import ActorPoint, PointKind, ReflectionPoint, SensorPose, WaveformParams
from .extraction import FitResult

EDIT_OPS = ("remove", "translate", "attrs")


def _load(path: str | Path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object at top level")
    return data


def _dump(path: str | Path, data) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def pose_to_dict(pose: SensorPose) -> dict:
    return {"x": pose.x, "y": pose.y, "heading": pose.heading,
            "vx": pose.vx, "vy": pose.vy}


def pose_from_dict(data: dict) -> SensorPose:
    return SensorPose(x=float(data["x"]), y=float(data["y"]),
                      heading=float(data["heading"]),
                      vx=float(data.get("vx", 0.0)), vy=float(data.get("vy", 0.0)))


def actor_to_dict(actor: ActorPoint) -> dict:
    return {"x": actor.x, "y": actor.y, "vx": actor.vx, "vy": actor.vy,
            "rcs": actor.rcs, "actor_id": actor.actor_id}


def actor_from_dict(data: dict) -> ActorPoint:
    return ActorPoint(x=float(data["x"]), y=float(data["y"]),
                      vx=float(data.get("vx", 0.0)), vy=float(data.get("vy", 0.0)),
                      rcs=float(data["rcs"]), actor_id=int(data["actor_id"]))


def load_scene(path: str | Path) -> tuple[SensorPose, list[ActorPoint]]:
    data = _load(path)
    try:
        pose = pose_from_dict(data["sensor_pose"])
        actors = [actor_from_dict(a) for a in data["actors"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: malformed scene file ({exc})") from exc
    return pose, actors


def save_scene(path: str | Path, pose: SensorPose, actors: list[ActorPoint]) -> None:
    _dump(path, {"sensor_pose": pose_to_dict(pose),
                 "actors": [actor_to_dict(a) for a in actors]})


def point_to_dict(point: ReflectionPoint) -> dict:
    return {"r_bin": point.r_bin, "d_bin": point.d_bin, "a_bin": point.a_bin,
            "intensity": point.intensity, "kind": point.kind.value,
            "actor_id": point.actor_id}


def point_from_dict(data: dict) -> ReflectionPoint:
    actor_id = data.get("actor_id")
    return ReflectionPoint(
        r_bin=float(data["r_bin"]), d_bin=float(data["d_bin"]),
        a_bin=float(data["a_bin"]), intensity=float(data["intensity"]),
        kind=PointKind(data.get("kind", "scene")),
        actor_id=None if actor_id is None else int(actor_id))


def load_points(path: str | Path) -> list[ReflectionPoint]:
    data = _load(path)
    try:
        return [point_from_dict(p) for p in data["points"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: malformed points file ({exc})") from exc


def save_points(path: str | Path, points: list[ReflectionPoint]) -> None:
    _dump(path, {"points": [point_to_dict(p) for p in points]})


def params_to_dict(params: WaveformParams) -> dict:
    return {"sigma": params.sigma, "g": params.g, "n_window": params.n_window,
            "p_window": params.p_window, "s_doppler": params.s_doppler}


def params_from_dict(data: dict) -> WaveformParams:
    return WaveformParams(
        sigma=float(data["sigma"]), g=float(data["g"]),
        n_window=int(data["n_window"]), p_window=float(data["p_window"]),
        s_doppler=float(data.get("s_doppler", 2.0)))


def load_params(path: str | Path) -> WaveformParams:
    data = _load(path)
    try:
        return params_from_dict(data)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: malformed params file ({exc})") from exc


def save_params(path: str | Path, params: WaveformParams) -> None:
    _dump(path, params_to_dict(params))


def save_fit_result(path: str | Path, result: FitResult) -> None:
    _dump(path, {
        **params_to_dict(result.params),
        "rs": result.lobes.rs,
        "lambda": result.lobes.lam,
        "residuals": result.residuals,
        "peaks_used": result.peaks_used,
    })


def load_edit_script(path: str | Path) -> list[dict]:
    """Ordered edit operations; each entry has an ``op`` key from EDIT_OPS."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise ValueError(f"{path}: edit script must be a JSON list")
    for i, op in enumerate(data):
        if not isinstance(op, dict) or op.get("op") not in EDIT_OPS:
            raise ValueError(f"{path}: entry {i} must set 'op' to one of {EDIT_OPS}")
    return data


def save_manifest(path: str | Path, manifest: dict) -> None:
    _dump(path, manifest)


def load_manifest(path: str | Path) -> dict:
    data = _load(path)
    if "entries" not in data:
        raise ValueError(f"{path}: manifest missing 'entries'")
    return data


def save_report(path: str | Path, report_dict: dict) -> None:
    _dump(path, report_dict)
