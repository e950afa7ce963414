import numpy as np
import pytest

from camwarp import (
    ConfigError,
    DepthMap,
    DimensionMismatchError,
    WarpGrid,
    multi_resolution_set,
    sample,
    sample_depth,
    sample_image,
)


def identity_grid(height, width, wrap_x=False):
    u, v = np.meshgrid(np.arange(width) + 0.5, np.arange(height) + 0.5)
    return WarpGrid(u, v, np.ones((height, width), dtype=bool), width, height, wrap_x)


class TestSampleImage:
    def test_identity_nearest_bit_exact(self):
        rng = np.random.default_rng(0)
        image = rng.integers(0, 256, size=(40, 50, 3), dtype=np.uint8)
        out, ok = sample_image(identity_grid(40, 50), image, interp="nearest")
        np.testing.assert_array_equal(out, image)
        assert ok.all()

    def test_identity_bilinear_bit_exact_at_centers(self):
        rng = np.random.default_rng(1)
        image = rng.integers(0, 256, size=(40, 50, 3), dtype=np.uint8)
        out, _ = sample_image(identity_grid(40, 50), image, interp="bilinear")
        np.testing.assert_array_equal(out, image)

    def test_constant_source(self):
        image = np.full((8, 8), 77, dtype=np.uint8)
        grid = identity_grid(8, 8)
        grid = WarpGrid(grid.src_x + 0.25, grid.src_y - 0.3, grid.valid, 8, 8)
        out, _ = sample_image(grid, image, interp="bilinear")
        assert np.all(out == 77)

    def test_invalid_cells_zeroed(self):
        image = np.full((8, 8, 3), 200, dtype=np.uint8)
        grid = identity_grid(8, 8)
        valid = grid.valid.copy()
        valid[2, 3] = False
        grid = WarpGrid(grid.src_x, grid.src_y, valid, 8, 8)
        out, ok = sample_image(grid, image)
        assert np.all(out[2, 3] == 0)
        assert not ok[2, 3]

    def test_dimension_mismatch(self):
        image = np.zeros((10, 10), dtype=np.uint8)
        with pytest.raises(DimensionMismatchError):
            sample_image(identity_grid(8, 8), image)

    def test_unknown_interp(self):
        with pytest.raises(ConfigError):
            sample_image(identity_grid(4, 4), np.zeros((4, 4), np.uint8), interp="cubic")

    def test_wrap_seam_interpolates_across(self):
        image = np.zeros((2, 8), dtype=np.float64)
        image[:, 0] = 10.0
        image[:, 7] = 30.0
        grid = identity_grid(2, 8, wrap_x=True)
        # x = 0.0 sits midway between the centers of the last and first column
        grid = WarpGrid(np.full_like(grid.src_x, 0.0), grid.src_y, grid.valid, 8, 2, wrap_x=True)
        out, _ = sample_image(grid, image, interp="bilinear")
        np.testing.assert_allclose(out, 20.0)

    def test_float_gradient_bilinear_midpoint(self):
        image = np.arange(5, dtype=np.float64)[None, :].repeat(3, axis=0)
        grid = identity_grid(3, 5)
        grid = WarpGrid(grid.src_x + 0.5, grid.src_y, grid.valid, 5, 3)
        out, _ = sample_image(grid, image, interp="bilinear")
        np.testing.assert_allclose(out[:, :3], image[:, :3] + 0.5)


class TestSampleDepth:
    def test_nearest_keeps_exact_values(self):
        values = np.array([[1.0, 2.0], [3.0, 4.0]])
        depth = DepthMap.from_values(values)
        out = sample_depth(identity_grid(2, 2), depth)
        np.testing.assert_array_equal(out.values, values)

    def test_bilinear_rejects_discontinuity_straddle(self):
        values = np.ones((4, 4))
        values[:, 2:] = 0.0  # invalid half
        depth = DepthMap.from_values(values)
        grid = identity_grid(4, 4)
        grid = WarpGrid(grid.src_x + 0.5, grid.src_y, grid.valid, 4, 4)
        out = sample_depth(grid, depth, interp="bilinear")
        assert out.valid[0, 0]
        assert not out.valid[0, 1]  # taps one invalid neighbor
        np.testing.assert_allclose(out.values[out.valid], 1.0)

    def test_dispatcher_defaults(self):
        depth = DepthMap.from_values(np.full((4, 4), 2.0))
        out = sample(identity_grid(4, 4), depth)
        assert isinstance(out, DepthMap)
        image_out, _ = sample(identity_grid(4, 4), np.zeros((4, 4), np.uint8))
        assert image_out.dtype == np.uint8


class TestMultiResolution:
    def test_ratio_one_unchanged(self):
        image = np.random.default_rng(2).integers(0, 255, (10, 14, 3), dtype=np.uint8)
        depth = DepthMap.from_values(np.full((10, 14), 3.0))
        [(img, dep, scale)] = multi_resolution_set(image, depth, ratios=(1.0,))
        assert img is image and dep is depth and scale == 1.0

    def test_half_ratio_doubles_depth(self):
        image = np.zeros((500, 700, 3), dtype=np.uint8)
        depth = DepthMap.from_values(np.full((500, 700), 5.0))
        outputs = multi_resolution_set(image, depth, ratios=(0.5,))
        img, dep, scale = outputs[0]
        assert img.shape == (250, 350, 3)
        assert scale == 2.0
        np.testing.assert_allclose(dep.values[dep.valid], 10.0)

    def test_paper_style_ratios_dims(self):
        image = np.zeros((500, 700, 3), dtype=np.uint8)
        outputs = multi_resolution_set(image, None, ratios=(0.7, 0.4))
        assert outputs[0][0].shape == (350, 490, 3)
        assert outputs[1][0].shape == (200, 280, 3)
        assert outputs[0][2] == pytest.approx(500 / 350)

    def test_mask_downsampled_nearest(self):
        values = np.full((10, 10), 2.0)
        values[5:, :] = 0.0
        depth = DepthMap.from_values(values)
        outputs = multi_resolution_set(None, depth, ratios=(0.5,), apply_depth_scale=False)
        dep = outputs[0][1]
        assert dep.valid[:2].all()
        assert not dep.valid[3:].any()

    def test_empty_ratios_rejected(self):
        with pytest.raises(ConfigError):
            multi_resolution_set(np.zeros((4, 4, 3), np.uint8), None, ratios=())

    def test_out_of_range_ratio_rejected(self):
        with pytest.raises(ConfigError):
            multi_resolution_set(np.zeros((4, 4, 3), np.uint8), None, ratios=(1.5,))
