"""Analytic range-Doppler-azimuth radar cube simulation toolkit."""

from .core import (ActorPoint, LobeParams, PointKind, RadarCube, RadarGrid,
                   ReflectionPoint, ScenePointSet, SensorPose, WaveformParams,
                   build_environment_tensor, project_to_bins,
                   radar_equation_intensity, wrap_angle)
from .cubefile import CubeFormatError, read_cube, write_cube
from .dataset import DatasetBSpec, generate_dataset
from .editing import modify_attributes, remove_actor, translate_sensor
from .extraction import CfarConfig, FitResult, cfar_extract, fit_waveform_params
from .metrics import (MetricReport, frechet_stats_distance, metric_report, ppe,
                      ppe_scene, ppse, ra_projection, rd_projection)
from .psf import (SeparableKernel, derive_lobe_params, eval_azimuth_profile,
                  eval_doppler_profile, eval_range_profile, fit_window_from_lobes,
                  psf_kernel)
from .render import render_annotated, render_projections
from .synthesis import (NoiseConfig, default_noise_config, sample_noise_points,
                        synthesize_fast, synthesize_naive, synthesize_scene)

__version__ = "0.1.0"

__all__ = [
    "ActorPoint", "CfarConfig", "CubeFormatError", "DatasetBSpec", "FitResult",
    "LobeParams", "MetricReport", "NoiseConfig", "PointKind", "RadarCube",
    "RadarGrid", "ReflectionPoint", "ScenePointSet", "SensorPose",
    "SeparableKernel", "WaveformParams", "build_environment_tensor",
    "cfar_extract", "default_noise_config", "derive_lobe_params",
    "eval_azimuth_profile", "eval_doppler_profile", "eval_range_profile",
    "fit_waveform_params", "fit_window_from_lobes", "frechet_stats_distance",
    "generate_dataset", "metric_report", "modify_attributes", "ppe",
    "ppe_scene", "ppse", "project_to_bins", "psf_kernel", "ra_projection",
    "radar_equation_intensity", "rd_projection", "read_cube", "remove_actor",
    "render_annotated", "render_projections", "sample_noise_points",
    "synthesize_fast", "synthesize_naive", "synthesize_scene",
    "translate_sensor", "wrap_angle", "write_cube",
]
