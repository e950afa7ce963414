import numpy as np
import pytest

from camwarp import (
    AxisBox,
    CheckerSphere,
    ConcentricSphere,
    ConfigError,
    ErpCamera,
    Plane,
    camera_rays,
    render,
    unproject_depth,
)
from camwarp.geometry import rot_x, rot_y
from camwarp.scenes import scene_from_dict


def ray_march_box(ray, half_extents, step=1e-4, t_max=20.0):
    """Brute-force oracle: walk along the ray until leaving the box."""
    h = np.asarray(half_extents)
    t = 0.0
    while t < t_max:
        p = ray * t
        if np.any(np.abs(p) > h):
            return t
        t += step
    return np.inf


class TestSphere:
    def test_depth_is_radius_everywhere(self, persp_camera):
        _, depth = render(ConcentricSphere(2.0), persp_camera)
        assert depth.valid.all()
        np.testing.assert_array_equal(depth.values, 2.0)

    def test_rotation_invariance(self, erp_camera):
        _, d0 = render(ConcentricSphere(2.0), erp_camera)
        _, d1 = render(ConcentricSphere(2.0), erp_camera, pose=rot_x(0.7) @ rot_y(-1.2))
        np.testing.assert_array_equal(d0.values, d1.values)

    def test_checker_sphere_same_depth(self, persp_camera):
        _, depth = render(CheckerSphere(2.0, period=0.3), persp_camera)
        np.testing.assert_array_equal(depth.values, 2.0)


class TestPlane:
    def test_principal_point_distance(self, persp_camera):
        dist, ok = Plane((0.0, 0.0, 1.0), 2.0).hit_distance(np.array([0.0, 0.0, 1.0]))
        assert ok
        assert dist == pytest.approx(2.0, abs=1e-12)
        # the pixel nearest the principal point sits half a pixel off-axis
        _, depth = render(Plane((0.0, 0.0, 1.0), 2.0), persp_camera)
        assert depth.values[60, 80] == pytest.approx(2.0, abs=1e-4)

    def test_45_degrees_off_axis(self):
        # A ray 45 degrees off a frontal plane travels sqrt(2) times farther.
        plane = Plane((0.0, 0.0, 1.0), 2.0)
        ray = np.array([np.sqrt(0.5), 0.0, np.sqrt(0.5)])
        dist, ok = plane.hit_distance(ray)
        assert ok
        assert dist == pytest.approx(2.0 * np.sqrt(2.0), abs=1e-12)

    def test_parallel_rays_invalid(self):
        plane = Plane((0.0, 0.0, 1.0), 2.0)
        _, ok = plane.hit_distance(np.array([1.0, 0.0, 0.0]))
        assert not ok


class TestAxisBox:
    def test_against_ray_march_oracle(self, persp_camera):
        box = AxisBox((1.5, 1.0, 2.0))
        rays, _ = camera_rays(persp_camera, width=32, height=24)
        dist, ok = box.hit_distance(rays)
        assert ok.all()
        rng = np.random.default_rng(0)
        for _ in range(40):
            i, j = rng.integers(0, 24), rng.integers(0, 32)
            marched = ray_march_box(rays[i, j], (1.5, 1.0, 2.0))
            assert dist[i, j] == pytest.approx(marched, abs=2e-4)

    def test_unproject_lands_on_box_surface(self, persp_camera):
        box = AxisBox((1.5, 1.0, 2.0))
        _, depth = render(box, persp_camera)
        cloud = unproject_depth(depth, persp_camera)
        h = np.array([1.5, 1.0, 2.0])
        on_face = np.isclose(np.abs(cloud.points) / h, 1.0, atol=1e-6).any(axis=-1)
        inside = (np.abs(cloud.points) <= h * (1 + 1e-9)).all(axis=-1)
        assert on_face.all() and inside.all()

    def test_depth_positive_inside(self):
        box = AxisBox((1.0, 1.0, 1.0))
        _, depth = render(box, ErpCamera(erp_height=32))
        assert depth.valid.all()
        assert (depth.values > 0).all()
        assert depth.values.max() <= np.sqrt(3.0) + 1e-9


class TestRenderSurface:
    def test_smooth_shading_is_smooth(self, persp_camera):
        image, _ = render(ConcentricSphere(2.0), persp_camera, shading="smooth")
        grad = np.abs(np.diff(image.astype(np.int16), axis=1))
        assert grad.max() <= 2  # direction gradient changes slowly per pixel

    def test_invalid_pixels_black(self, persp_camera):
        image, depth = render(Plane((0.0, 0.0, 1.0), 2.0), persp_camera, shading="scene")
        assert depth.valid.all()  # frontal plane covers the whole pinhole FoV
        image2, depth2 = render(Plane((1.0, 0.0, 0.0), 2.0), persp_camera)
        assert not depth2.valid.all()
        assert np.all(image2[~depth2.valid] == 0)

    def test_kb_render_via_lut(self, kb_camera, kb_lut):
        image, depth = render(ConcentricSphere(2.0), kb_camera, lut=kb_lut)
        assert depth.valid.any()
        assert not depth.valid.all()  # fisheye circle leaves corners invalid
        np.testing.assert_allclose(depth.values[depth.valid], 2.0)

    def test_bad_pose_shape_rejected(self, persp_camera):
        with pytest.raises(ConfigError):
            render(ConcentricSphere(1.0), persp_camera, pose=np.eye(4))


class TestSceneConfig:
    def test_round_trip_kinds(self):
        assert isinstance(scene_from_dict({"scene": "sphere", "radius": 2.0}), ConcentricSphere)
        assert isinstance(
            scene_from_dict({"scene": "checker_sphere", "radius": 2.0, "period": 0.2}),
            CheckerSphere,
        )
        assert isinstance(
            scene_from_dict({"scene": "plane", "normal": [0, 0, 1], "offset": 2.0}), Plane
        )
        assert isinstance(
            scene_from_dict({"scene": "box", "half_extents": [1, 1, 1]}), AxisBox
        )

    def test_unknown_scene_rejected(self):
        with pytest.raises(ConfigError):
            scene_from_dict({"scene": "torus"})

    def test_invalid_radius_rejected(self):
        with pytest.raises(ConfigError):
            scene_from_dict({"scene": "sphere", "radius": -1.0})
