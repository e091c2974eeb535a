import math

import numpy as np
import pytest

from radarcube import (ActorPoint, PointKind, RadarCube, RadarGrid, ReflectionPoint,
                       ScenePointSet, SensorPose, build_environment_tensor,
                       project_to_bins, radar_equation_intensity, wrap_angle)


def test_grid_rejects_small_axes():
    for field in ("n_range", "n_doppler", "n_azimuth"):
        kwargs = dict(n_range=16, n_doppler=16, n_azimuth=16,
                      range_resolution=0.2, doppler_resolution=0.1,
                      azimuth_fov=math.pi / 2)
        kwargs[field] = 7
        with pytest.raises(ValueError):
            RadarGrid(**kwargs)


def test_grid_rejects_bad_resolutions():
    with pytest.raises(ValueError):
        RadarGrid(16, 16, 16, 0.0, 0.1, 1.0)
    with pytest.raises(ValueError):
        RadarGrid(16, 16, 16, 0.1, -0.1, 1.0)
    with pytest.raises(ValueError):
        RadarGrid(16, 16, 16, 0.1, 0.1, 0.0)
    with pytest.raises(ValueError):
        RadarGrid(16, 16, 16, 0.1, 0.1, math.pi + 0.01)
    with pytest.raises(ValueError):
        RadarGrid(16, 16, 16, math.nan, 0.1, 1.0)


def test_doppler_center_is_floor_half():
    assert RadarGrid(16, 9, 16, 0.1, 0.1, 1.0).doppler_center == 4
    assert RadarGrid(16, 64, 16, 0.1, 0.1, 1.0).doppler_center == 32


def test_wrap_angle_range():
    for a in (-10.0, -math.pi, 0.0, math.pi, 3 * math.pi, 10.0):
        w = wrap_angle(a)
        assert -math.pi < w <= math.pi
    assert wrap_angle(math.pi) == pytest.approx(math.pi)
    assert wrap_angle(-math.pi) == pytest.approx(math.pi)
    assert wrap_angle(0.3) == pytest.approx(0.3)


class TestProjection:
    def grid(self):
        return RadarGrid(256, 64, 256, 50.0 / 256, 0.13, math.pi / 2)

    def test_boresight_actor(self):
        grid = self.grid()
        actor = ActorPoint(x=10.0, y=0.0, vx=0.0, vy=0.0, rcs=1.0, actor_id=1)
        pose = SensorPose(0.0, 0.0, 0.0)
        (pt,) = project_to_bins([actor], pose, grid)
        assert pt.r_bin == pytest.approx(10.0 / (50.0 / 256))  # 51.2
        assert pt.a_bin == pytest.approx(grid.n_azimuth / 2)
        assert pt.d_bin == pytest.approx(grid.doppler_center)
        assert pt.kind is PointKind.SCENE
        assert pt.actor_id == 1

    def test_outside_fov_excluded(self):
        grid = self.grid()
        # bearing 60 deg > fov/2 = 45 deg
        actor = ActorPoint(x=5.0, y=5.0 * math.tan(math.radians(60)), vx=0, vy=0,
                           rcs=1.0, actor_id=1)
        assert project_to_bins([actor], SensorPose(0, 0, 0), grid) == []

    def test_approaching_doppler_bin(self):
        # radial velocity -2 m/s at 0.13 m/s per bin
        grid = self.grid()
        actor = ActorPoint(x=10.0, y=0.0, vx=-2.0, vy=0.0, rcs=1.0, actor_id=1)
        (pt,) = project_to_bins([actor], SensorPose(0, 0, 0), grid)
        assert pt.d_bin == pytest.approx(grid.doppler_center - 2.0 / 0.13)

    def test_drops_beyond_max_range(self):
        grid = self.grid()
        actor = ActorPoint(x=grid.max_range + 1.0, y=0.0, vx=0, vy=0, rcs=1.0, actor_id=1)
        assert project_to_bins([actor], SensorPose(0, 0, 0), grid) == []

    def test_drops_out_of_range_doppler(self):
        grid = self.grid()
        actor = ActorPoint(x=10.0, y=0.0, vx=100.0, vy=0.0, rcs=1.0, actor_id=1)
        assert project_to_bins([actor], SensorPose(0, 0, 0), grid) == []

    def test_drops_actor_at_sensor(self):
        grid = self.grid()
        actor = ActorPoint(x=0.0, y=0.0, vx=0, vy=0, rcs=1.0, actor_id=1)
        assert project_to_bins([actor], SensorPose(0, 0, 0), grid) == []

    def test_rigid_motion_covariance(self):
        grid = self.grid()
        rng = np.random.default_rng(11)
        for _ in range(25):
            actors = [ActorPoint(rng.uniform(2, 30), rng.uniform(-10, 10),
                                 rng.uniform(-3, 3), rng.uniform(-3, 3),
                                 rng.uniform(0.5, 5.0), int(i)) for i in range(6)]
            pose = SensorPose(rng.uniform(-5, 5), rng.uniform(-5, 5),
                              rng.uniform(-1, 1), rng.uniform(-2, 2), rng.uniform(-2, 2))
            theta = rng.uniform(-math.pi, math.pi)
            tx, ty = rng.uniform(-20, 20, 2)
            c, s = math.cos(theta), math.sin(theta)

            def move(x, y):
                return c * x - s * y + tx, s * x + c * y + ty

            def rot(x, y):
                return c * x - s * y, s * x + c * y

            moved = [ActorPoint(*move(a.x, a.y), *rot(a.vx, a.vy), a.rcs, a.actor_id)
                     for a in actors]
            moved_pose = SensorPose(*move(pose.x, pose.y),
                                    wrap_angle(pose.heading + theta),
                                    *rot(pose.vx, pose.vy))
            before = project_to_bins(actors, pose, grid)
            after = project_to_bins(moved, moved_pose, grid)
            assert len(before) == len(after)
            for b, a in zip(before, after):
                assert b.r_bin == pytest.approx(a.r_bin, abs=1e-9)
                assert b.d_bin == pytest.approx(a.d_bin, abs=1e-9)
                assert b.a_bin == pytest.approx(a.a_bin, abs=1e-9)
                assert b.intensity == pytest.approx(a.intensity, rel=1e-9)


class TestRadarEquation:
    def test_zero_rcs(self):
        assert radar_equation_intensity(0.0, 5.0) == 0.0

    def test_inverse_fourth_power(self):
        near = radar_equation_intensity(2.0, 7.0)
        far = radar_equation_intensity(2.0, 14.0)
        assert near == pytest.approx(16.0 * far)

    def test_reference_value(self):
        assert radar_equation_intensity(1.0, 10.0, 1.0e4) == pytest.approx(1.0)

    def test_rejects_degenerate_range(self):
        with pytest.raises(ValueError):
            radar_equation_intensity(1.0, 0.0)
        with pytest.raises(ValueError):
            radar_equation_intensity(1.0, -1.0)


class TestEnvironmentTensor:
    def grid(self):
        return RadarGrid(16, 8, 16, 0.5, 0.1, 1.0)

    def test_empty(self):
        cube, pts = build_environment_tensor([], self.grid())
        assert cube.values.sum() == 0.0
        assert len(pts) == 0

    def test_single_point_rounding(self):
        grid = self.grid()
        p = ReflectionPoint(10.4, 3.0, 7.6, 2.5, PointKind.SCENE)
        cube, pts = build_environment_tensor([p], grid)
        assert cube.values[10, 3, 8] == 2.5
        assert cube.values.sum() == 2.5
        assert pts.indices.tolist() == [[10, 3, 8]]

    def test_collision_sums(self):
        grid = self.grid()
        points = [ReflectionPoint(5.2, 2.1, 3.9, 1.0, PointKind.SCENE),
                  ReflectionPoint(4.8, 1.8, 4.4, 0.5, PointKind.NOISE)]
        cube, _ = build_environment_tensor(points, grid)
        # scalar reference: accumulate into a dict keyed by rounded bins
        ref = {}
        for p in points:
            key = (min(math.floor(p.r_bin + 0.5), 15), min(math.floor(p.d_bin + 0.5), 7),
                   min(math.floor(p.a_bin + 0.5), 15))
            ref[key] = ref.get(key, 0.0) + p.intensity
        assert ref == {(5, 2, 4): 1.5}
        assert cube.values[5, 2, 4] == 1.5

    def test_total_mass_equals_intensity_sum(self):
        grid = self.grid()
        rng = np.random.default_rng(3)
        points = [ReflectionPoint(float(rng.uniform(0, 16)), float(rng.uniform(0, 8)),
                                  float(rng.uniform(0, 16)), float(rng.uniform(0, 2)),
                                  PointKind.NOISE) for _ in range(50)]
        cube, _ = build_environment_tensor(points, grid)
        assert cube.values.sum() == pytest.approx(sum(p.intensity for p in points))

    def test_out_of_bounds_reports_index(self):
        grid = self.grid()
        points = [ReflectionPoint(1.0, 1.0, 1.0, 1.0, PointKind.NOISE),
                  ReflectionPoint(99.0, 1.0, 1.0, 1.0, PointKind.NOISE)]
        with pytest.raises(ValueError, match="point 1"):
            build_environment_tensor(points, grid)

    def test_top_sliver_clamps_to_last_bin(self):
        grid = self.grid()
        cube, _ = build_environment_tensor(
            [ReflectionPoint(15.8, 7.7, 15.9, 1.0, PointKind.NOISE)], grid)
        assert cube.values[15, 7, 15] == 1.0


def test_constructors_reject_nan():
    with pytest.raises(ValueError):
        ReflectionPoint(math.nan, 0, 0, 1.0, PointKind.NOISE)
    with pytest.raises(ValueError):
        ReflectionPoint(0, 0, 0, math.inf, PointKind.NOISE)
    with pytest.raises(ValueError):
        ActorPoint(math.nan, 0, 0, 0, 1.0, 1)
    with pytest.raises(ValueError):
        SensorPose(0, 0, math.nan)
    grid = RadarGrid(8, 8, 8, 1.0, 1.0, 1.0)
    bad = np.zeros(grid.shape)
    bad[0, 0, 0] = math.nan
    with pytest.raises(ValueError):
        RadarCube(grid, bad)


def test_reflection_point_invariants():
    with pytest.raises(ValueError):
        ReflectionPoint(0, 0, 0, -1.0, PointKind.NOISE)
    with pytest.raises(ValueError):
        ReflectionPoint(0, 0, 0, 1.0, PointKind.NOISE, actor_id=3)
    ReflectionPoint(0, 0, 0, 1.0, PointKind.SCENE, actor_id=3)


def test_sensor_pose_heading_validated():
    with pytest.raises(ValueError):
        SensorPose(0, 0, heading=4.0)
    SensorPose(0, 0, heading=math.pi)


def test_cube_rejects_negative_and_shape_mismatch():
    grid = RadarGrid(8, 8, 8, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        RadarCube(grid, -np.ones(grid.shape))
    with pytest.raises(ValueError):
        RadarCube(grid, np.zeros((8, 8, 9)))


def test_cube_is_immutable():
    grid = RadarGrid(8, 8, 8, 1.0, 1.0, 1.0)
    cube = RadarCube.zeros(grid)
    with pytest.raises((ValueError, AttributeError)):
        cube.values[0, 0, 0] = 1.0


def test_scene_point_set_uniqueness():
    with pytest.raises(ValueError):
        ScenePointSet(np.array([[1, 2, 3], [1, 2, 3]]))
    pts = ScenePointSet(np.array([[1, 2, 3], [1, 2, 4]]))
    assert len(pts) == 2
