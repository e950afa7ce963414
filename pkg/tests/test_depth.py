import numpy as np
import pytest

from camwarp import (
    ConcentricSphere,
    ConfigError,
    DepthMap,
    ErpCamera,
    ErpPatchSpec,
    MissingLutError,
    Plane,
    camera_rays,
    euclidean_to_z,
    render,
    rescale_for_canonical,
    rescale_for_resize,
    unproject_depth,
    virtual_focal,
    z_to_euclidean,
)


class TestDepthMap:
    def test_sanitizes_invalid_values(self):
        values = np.array([[1.0, -1.0], [np.inf, 0.0]])
        d = DepthMap(values, np.ones((2, 2), dtype=bool))
        assert d.valid.tolist() == [[True, False], [False, False]]
        assert d.values[0, 1] == 0.0


class TestCanonicalRescale:
    def test_identity(self):
        d = DepthMap.from_values(np.full((4, 4), 7.0))
        out = rescale_for_canonical(d, 519.0, 519.0)
        np.testing.assert_array_equal(out.values, d.values)

    def test_kitti_canonical_value(self):
        d = DepthMap.from_values(np.full((2, 2), 10.0))
        out = rescale_for_canonical(d, 500.0, 721.0)
        np.testing.assert_allclose(out.values[out.valid], 14.42)

    def test_exactly_multiplicative(self):
        rng = np.random.default_rng(0)
        values = rng.uniform(0.5, 50.0, (32, 32))
        d = DepthMap.from_values(values)
        out = rescale_for_canonical(d, 500.0, 721.0)
        np.testing.assert_array_equal(out.values, values * (721.0 / 500.0))

    def test_round_trip(self):
        rng = np.random.default_rng(1)
        d = DepthMap.from_values(rng.uniform(0.5, 50.0, (16, 16)))
        back = rescale_for_canonical(rescale_for_canonical(d, 500.0, 721.0), 721.0, 500.0)
        np.testing.assert_allclose(back.values, d.values, rtol=1e-12)

    def test_rejects_nonpositive_focal(self):
        d = DepthMap.from_values(np.ones((2, 2)))
        with pytest.raises(ConfigError):
            rescale_for_canonical(d, 0.0, 500.0)


class TestResizeRescale:
    def test_identity(self):
        assert rescale_for_resize(500, 500) == 1.0

    def test_half(self):
        assert rescale_for_resize(500, 250) == 2.0

    def test_seventy_percent(self):
        assert rescale_for_resize(700, 490) == pytest.approx(10.0 / 7.0, rel=1e-15)

    def test_rejects_zero(self):
        with pytest.raises(ConfigError):
            rescale_for_resize(500, 0)


class TestVirtualFocal:
    def test_erp_height_1400(self):
        assert virtual_focal(1400) == pytest.approx(1.0 / np.tan(np.pi / 1400), abs=1e-12)
        assert virtual_focal(1400) == pytest.approx(445.633, abs=1e-3)

    def test_height_four_gives_unity(self):
        assert virtual_focal(4) == pytest.approx(1.0, abs=1e-12)

    def test_canonical_over_virtual_factor(self):
        assert 519.0 / virtual_focal(1400) == pytest.approx(1.1646, abs=1e-4)

    def test_strictly_increasing(self):
        values = [virtual_focal(h) for h in range(4, 4000, 7)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_rejects_tiny_height(self):
        with pytest.raises(ConfigError):
            virtual_focal(1)


class TestZEuclidean:
    def test_on_axis(self):
        rays = np.zeros((1, 1, 3))
        rays[..., 2] = 1.0
        d = z_to_euclidean(np.full((1, 1), 5.0), rays)
        assert d.values[0, 0] == 5.0

    def test_sixty_degrees_off_axis(self):
        rays = np.array([[[np.sqrt(3) / 2, 0.0, 0.5]]])
        d = z_to_euclidean(np.ones((1, 1)), rays)
        assert d.values[0, 0] == pytest.approx(2.0, abs=1e-12)

    def test_grazing_invalidated(self):
        rays = np.array([[[1.0, 0.0, 0.0]]])
        d = z_to_euclidean(np.ones((1, 1)), rays)
        assert not d.valid.any()

    def test_round_trip_perspective(self, persp_camera):
        rays, _ = camera_rays(persp_camera)
        rng = np.random.default_rng(2)
        z_map = rng.uniform(1.0, 10.0, rays.shape[:2])
        depth = z_to_euclidean(z_map, rays)
        z_back, valid = euclidean_to_z(depth, rays)
        assert valid.all()
        np.testing.assert_allclose(z_back, z_map, atol=1e-9)


class TestUnprojectDepth:
    def test_concentric_sphere_norms(self, erp_camera):
        _, depth = render(ConcentricSphere(3.0), erp_camera)
        cloud = unproject_depth(depth, erp_camera)
        norms = np.linalg.norm(cloud.points, axis=-1)
        np.testing.assert_allclose(norms, 3.0, atol=1e-6)

    def test_erp_patch_placement(self):
        cam = ErpCamera(erp_height=200)
        spec = ErpPatchSpec(200, 80, 120, center_lat=0.5)
        values = np.full((80, 120), 2.0)
        cloud = unproject_depth(DepthMap.from_values(values), cam, spec=spec)
        assert len(cloud) == 80 * 120
        np.testing.assert_allclose(np.linalg.norm(cloud.points, axis=-1), 2.0, atol=1e-9)
        # points concentrate around the patch-center direction
        mean_dir = cloud.points.mean(axis=0)
        assert mean_dir[1] > 0.1  # positive latitude points downward (+y)

    def test_plane_scene_recovers_plane(self, persp_camera):
        _, depth = render(Plane(normal=(0.0, 0.0, 1.0), offset=2.0), persp_camera)
        cloud = unproject_depth(depth, persp_camera)
        np.testing.assert_allclose(cloud.points[:, 2], 2.0, atol=1e-3)

    def test_empty_mask_gives_empty_cloud(self, persp_camera):
        values = np.zeros((persp_camera.height, persp_camera.width))
        cloud = unproject_depth(DepthMap.from_values(values), persp_camera)
        assert len(cloud) == 0

    def test_missing_lut_raises(self, kb_camera):
        values = np.ones((kb_camera.height, kb_camera.width))
        with pytest.raises(MissingLutError):
            unproject_depth(DepthMap.from_values(values), kb_camera)

    def test_colors_follow_mask(self, persp_camera):
        image, depth = render(ConcentricSphere(2.0), persp_camera)
        cloud = unproject_depth(depth, persp_camera, image=image)
        assert cloud.colors is not None
        assert cloud.colors.shape == (len(cloud), 3)

    def test_kb_lut_points_on_sphere(self, kb_camera, kb_lut):
        _, depth = render(ConcentricSphere(2.0), kb_camera, lut=kb_lut)
        cloud = unproject_depth(depth, kb_camera, lut=kb_lut)
        np.testing.assert_allclose(np.linalg.norm(cloud.points, axis=-1), 2.0, atol=1e-6)

    def test_mei_lut_points_on_sphere(self, mei_camera, mei_lut):
        _, depth = render(ConcentricSphere(2.0), mei_camera, lut=mei_lut)
        cloud = unproject_depth(depth, mei_camera, lut=mei_lut)
        assert len(cloud) > 1000
        np.testing.assert_allclose(np.linalg.norm(cloud.points, axis=-1), 2.0, atol=1e-6)
