"""Command-line interface: synth, extract, fit, edit, metrics, gen-dataset, render.

Exit codes: 0 success, 1 usage error, 2 data error. All pipelines are
deterministic for a fixed ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import scipy.fft

from . import jsonio
from .config import merged_config
from .core import RadarGrid, ScenePointSet, WaveformParams, project_to_bins, wrap_angle
from .cubefile import CubeFormatError, read_cube, write_cube
from .dataset import DatasetBSpec, generate_dataset
from .editing import remove_actor
from .extraction import CfarConfig, cfar_extract, fit_waveform_params
from .metrics import frechet_stats_distance, metric_report, ra_projection
from .render import render_annotated, render_comparison, render_projections
from .synthesis import NoiseConfig, sample_noise_points, synthesize_fast

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2
        raise _UsageError(message)


def _add_grid_options(parser):
    group = parser.add_argument_group("grid")
    group.add_argument("--n-range", type=int, dest="n_range")
    group.add_argument("--n-doppler", type=int, dest="n_doppler")
    group.add_argument("--n-azimuth", type=int, dest="n_azimuth")
    group.add_argument("--range-res", type=float, dest="range_resolution",
                       help="meters per range bin")
    group.add_argument("--doppler-res", type=float, dest="doppler_resolution",
                       help="m/s per Doppler bin")
    group.add_argument("--fov", type=float, dest="azimuth_fov",
                       help="azimuth field of view in radians")


def _add_noise_options(parser):
    group = parser.add_argument_group("noise")
    group.add_argument("--noise-count", type=int, dest="noise_count")
    group.add_argument("--noise-min", type=float, dest="noise_intensity_min")
    group.add_argument("--noise-max", type=float, dest="noise_intensity_max")


def _add_cfar_options(parser):
    group = parser.add_argument_group("cfar")
    group.add_argument("--guard", type=int, dest="cfar_guard")
    group.add_argument("--train", type=int, dest="cfar_train")
    group.add_argument("--alpha", type=float, dest="cfar_alpha")
    group.add_argument("--min-peak", type=float, dest="cfar_min_peak")


def _config(args) -> dict:
    overrides = {key: getattr(args, key, None) for key in (
        "n_range", "n_doppler", "n_azimuth", "range_resolution",
        "doppler_resolution", "azimuth_fov", "sigma", "g", "n_window",
        "p_window", "s_doppler", "intensity_scale", "noise_count",
        "noise_intensity_min", "noise_intensity_max", "cfar_guard",
        "cfar_train", "cfar_alpha", "cfar_min_peak")}
    return merged_config(args.config, overrides)


def _grid(cfg: dict) -> RadarGrid:
    return RadarGrid(cfg["n_range"], cfg["n_doppler"], cfg["n_azimuth"],
                     cfg["range_resolution"], cfg["doppler_resolution"],
                     cfg["azimuth_fov"])


def _waveform(cfg: dict) -> WaveformParams:
    return WaveformParams(sigma=cfg["sigma"], g=cfg["g"],
                          n_window=cfg["n_window"], p_window=cfg["p_window"],
                          s_doppler=cfg["s_doppler"])


def _noise(cfg: dict, seed: int) -> NoiseConfig:
    return NoiseConfig(count=cfg["noise_count"],
                       intensity_min=cfg["noise_intensity_min"],
                       intensity_max=cfg["noise_intensity_max"], seed=seed)


def _cfar(cfg: dict) -> CfarConfig:
    return CfarConfig(guard=cfg["cfar_guard"], train=cfg["cfar_train"],
                      alpha=cfg["cfar_alpha"], min_peak=cfg["cfar_min_peak"])


def _cmd_synth(args) -> int:
    cfg = _config(args)
    grid = _grid(cfg)
    params = jsonio.load_params(args.params) if args.params else _waveform(cfg)
    if args.points:
        points = jsonio.load_points(args.points)
    else:
        pose, actors = jsonio.load_scene(args.scene)
        scene_points = project_to_bins(actors, pose, grid, cfg["intensity_scale"])
        points = scene_points + sample_noise_points(grid, _noise(cfg, args.seed))
    cube = synthesize_fast(points, params, grid)
    write_cube(args.out, cube)
    if args.save_points:
        jsonio.save_points(args.save_points, points)
    print(f"wrote {args.out} ({grid.n_range}x{grid.n_doppler}x{grid.n_azimuth}, "
          f"{len(points)} points)")
    return EXIT_OK


def _cmd_extract(args) -> int:
    cfg = _config(args)
    cube = read_cube(args.cube)
    points = cfar_extract(cube, _cfar(cfg))
    jsonio.save_points(args.out, points)
    print(f"wrote {args.out} ({len(points)} detections)")
    return EXIT_OK


def _cmd_fit(args) -> int:
    cfg = _config(args)
    cube = read_cube(args.cube)
    peaks = cfar_extract(cube, _cfar(cfg))
    result = fit_waveform_params(cube, peaks, estimator=args.estimator)
    if args.out:
        jsonio.save_fit_result(args.out, result)
        print(f"wrote {args.out} ({result.peaks_used} peaks used)")
    else:
        payload = {**jsonio.params_to_dict(result.params),
                   "rs": result.lobes.rs, "lambda": result.lobes.lam,
                   "residuals": result.residuals,
                   "peaks_used": result.peaks_used}
        print(json.dumps(payload, indent=2))
    return EXIT_OK


def _cmd_edit(args) -> int:
    cfg = _config(args)
    grid = _grid(cfg)
    params = jsonio.load_params(args.params) if args.params else _waveform(cfg)
    pose, actors = jsonio.load_scene(args.scene)
    script = jsonio.load_edit_script(args.script)

    removals: list[tuple[int, float | None]] = []
    for op in script:
        if op["op"] == "translate":
            pose = replace(pose, x=pose.x + float(op.get("dx", 0.0)),
                           y=pose.y + float(op.get("dy", 0.0)),
                           heading=wrap_angle(pose.heading + float(op.get("dheading", 0.0))))
        elif op["op"] == "attrs":
            params = WaveformParams(
                sigma=float(op.get("sigma", params.sigma)),
                g=float(op.get("g", params.g)),
                n_window=int(op.get("n_window", params.n_window)),
                p_window=float(op.get("p_window", params.p_window)),
                s_doppler=float(op.get("s_doppler", params.s_doppler)))
        elif op["op"] == "remove":
            floor = op.get("noise_floor")
            removals.append((int(op["actor_id"]),
                             None if floor is None else float(floor)))

    scene_points = project_to_bins(actors, pose, grid, cfg["intensity_scale"])
    noise_points = sample_noise_points(grid, _noise(cfg, args.seed))
    # default removal floor: median intensity of the sampled noise
    if noise_points:
        default_floor = float(np.median([p.intensity for p in noise_points]))
    else:
        default_floor = 0.0
    for actor_id, floor in removals:
        scene_points = remove_actor(scene_points, actor_id,
                                    default_floor if floor is None else floor)
    points = scene_points + noise_points
    cube = synthesize_fast(points, params, grid)
    write_cube(args.out, cube)
    if args.save_points:
        jsonio.save_points(args.save_points, points)
    print(f"wrote {args.out} ({len(script)} edits applied)")
    return EXIT_OK


def _load_image_set(directory: str) -> list[np.ndarray]:
    files = sorted(Path(directory).glob("*.radc"))
    if len(files) < 2:
        raise ValueError(f"{directory}: need at least 2 .radc files for a set")
    return [ra_projection(read_cube(f)) for f in files]


def _cmd_metrics(args) -> int:
    sim = read_cube(args.sim)
    gt = read_cube(args.gt)
    scene = None
    if args.points:
        pts = jsonio.load_points(args.points)
        scene = ScenePointSet.from_points(pts, sim.grid)
    frechet = None
    if args.frechet_a or args.frechet_b:
        if not (args.frechet_a and args.frechet_b):
            raise ValueError("--frechet-a and --frechet-b must be given together")
        frechet = frechet_stats_distance(_load_image_set(args.frechet_a),
                                         _load_image_set(args.frechet_b))
    report = metric_report(sim, gt, scene, frechet)
    payload = report.to_dict()
    print(json.dumps(payload, indent=2))
    if args.out:
        jsonio.save_report(args.out, payload)
    if args.plot:
        render_comparison(sim, gt, args.plot)
    return EXIT_OK


def _cmd_gen_dataset(args) -> int:
    cfg = _config(args)
    grid = _grid(cfg)
    if args.spec and args.spec != "default":
        raw = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        spec = DatasetBSpec(
            sigma_set=tuple(raw.get("sigma", DatasetBSpec.sigma_set)),
            g_set=tuple(raw.get("g", DatasetBSpec.g_set)),
            n_set=tuple(raw.get("n_window", DatasetBSpec.n_set)),
            p_set=tuple(raw.get("p_window", DatasetBSpec.p_set)),
            scenes=args.scenes if args.scene_files is None else tuple(args.scene_files),
            seed=args.seed)
    else:
        spec = DatasetBSpec(
            scenes=args.scenes if args.scene_files is None else tuple(args.scene_files),
            seed=args.seed)
    manifest = generate_dataset(spec, grid, args.out, s_doppler=cfg["s_doppler"],
                                points_per_scene=args.points_per_scene)
    print(f"wrote {len(manifest['entries'])} cubes + manifest.json to {args.out}")
    return EXIT_OK


def _cmd_render(args) -> int:
    cube = read_cube(args.cube)
    ra_path, rd_path = render_projections(cube, args.out_prefix)
    written = [str(ra_path), str(rd_path)]
    if args.annotate:
        written += [str(p) for p in render_annotated(cube, args.out_prefix)]
    print("wrote " + ", ".join(written))
    return EXIT_OK


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="RNG seed for noise and dataset generation")
    common.add_argument("--config", type=str, default=None,
                        help="flat key = value config file")
    common.add_argument("--threads", type=int, default=1,
                        help="cap on internal FFT parallelism (outputs do not depend on it)")

    parser = _Parser(prog="radarcube",
                     description="Analytic radar cube simulation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common],
                       help="synthesize a cube from a scene or point list")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--scene", help="scene JSON (pose + actors); adds sampled noise")
    src.add_argument("--points", help="reflection-point JSON; used verbatim, no noise")
    p.add_argument("--params", help="waveform params JSON (default: config values)")
    p.add_argument("--out", required=True, help="output .radc path")
    p.add_argument("--save-points", help="also dump the synthesized point list")
    _add_grid_options(p)
    _add_noise_options(p)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("extract", parents=[common],
                       help="CFAR-extract reflection points from a cube")
    p.add_argument("cube")
    p.add_argument("--out", required=True, help="output points JSON")
    _add_cfar_options(p)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("fit", parents=[common],
                       help="fit waveform parameters from a cube")
    p.add_argument("cube")
    p.add_argument("--out", help="output JSON (default: print to stdout)")
    p.add_argument("--estimator", choices=("median", "mean"), default="median")
    _add_cfar_options(p)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("edit", parents=[common],
                       help="apply an edit script to a scene and re-synthesize")
    p.add_argument("--scene", required=True)
    p.add_argument("--script", required=True, help="edit script JSON")
    p.add_argument("--params")
    p.add_argument("--out", required=True)
    p.add_argument("--save-points")
    _add_grid_options(p)
    _add_noise_options(p)
    p.set_defaults(func=_cmd_edit)

    p = sub.add_parser("metrics", parents=[common],
                       help="compare two cubes and emit a report")
    p.add_argument("sim")
    p.add_argument("gt")
    p.add_argument("--points", help="points JSON; scene-kind bins restrict ppe_scene")
    p.add_argument("--frechet-a", help="directory of .radc files (set A)")
    p.add_argument("--frechet-b", help="directory of .radc files (set B)")
    p.add_argument("--out", help="write the report JSON here as well")
    p.add_argument("--plot", help="write a comparison figure (PNG) here")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("gen-dataset", parents=[common],
                       help="generate a parameter-labeled cube dataset")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--scenes", type=int, default=10, help="number of cubes")
    p.add_argument("--scene-files", nargs="+", help="scene JSONs instead of generated scenes")
    p.add_argument("--spec", default="default",
                   help="'default' or a JSON file with sigma/g/n_window/p_window sets")
    p.add_argument("--points-per-scene", type=int, default=None)
    _add_grid_options(p)
    p.set_defaults(func=_cmd_gen_dataset)

    p = sub.add_parser("render", parents=[common],
                       help="write RA/RD max-projection PNGs")
    p.add_argument("cube")
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--annotate", action="store_true",
                   help="also write labeled matplotlib figures")
    p.set_defaults(func=_cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        with scipy.fft.set_workers(max(args.threads, 1)):
            return args.func(args)
    except (CubeFormatError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
