"""Applying warp grids to images and depth maps, and multi-resolution sets.

Color images are sampled bilinearly by default. Depth defaults to nearest
neighbor: interpolating across a depth discontinuity invents surfaces that
exist nowhere in the scene, so bilinear depth is opt-in only.
"""

from __future__ import annotations

import numpy as np

from .depth import DepthMap
from .errors import ConfigError, DimensionMismatchError
from .erp import WarpGrid


def _check_src(grid: WarpGrid, array: np.ndarray):
    if array.shape[0] != grid.src_height or array.shape[1] != grid.src_width:
        raise DimensionMismatchError(
            f"source shape {array.shape[:2]} != grid source "
            f"({grid.src_height}, {grid.src_width})"
        )


def _nearest_indices(grid: WarpGrid):
    sx = np.where(grid.valid, grid.src_x, 0.0)
    sy = np.where(grid.valid, grid.src_y, 0.0)
    ix = np.floor(sx).astype(np.int64)
    iy = np.floor(sy).astype(np.int64)
    if grid.wrap_x:
        ix = np.mod(ix, grid.src_width)
    else:
        ix = np.clip(ix, 0, grid.src_width - 1)
    iy = np.clip(iy, 0, grid.src_height - 1)
    return iy, ix


def _bilinear_parts(grid: WarpGrid):
    sx = np.where(grid.valid, grid.src_x, 0.5)
    sy = np.where(grid.valid, grid.src_y, 0.5)
    xi = sx - 0.5
    yi = np.clip(sy - 0.5, 0.0, grid.src_height - 1.0)
    if grid.wrap_x:
        xi = np.mod(xi, grid.src_width)
        x0 = np.floor(xi).astype(np.int64)
        tx = xi - x0
        x0 = np.mod(x0, grid.src_width)
        x1 = np.mod(x0 + 1, grid.src_width)
    else:
        xi = np.clip(xi, 0.0, grid.src_width - 1.0)
        x0 = np.minimum(np.floor(xi).astype(np.int64), max(grid.src_width - 2, 0))
        tx = xi - x0
        x1 = np.minimum(x0 + 1, grid.src_width - 1)
    y0 = np.minimum(np.floor(yi).astype(np.int64), max(grid.src_height - 2, 0))
    ty = yi - y0
    y1 = np.minimum(y0 + 1, grid.src_height - 1)
    w00 = (1 - tx) * (1 - ty)
    w01 = tx * (1 - ty)
    w10 = (1 - tx) * ty
    w11 = tx * ty
    return (y0, x0, w00), (y0, x1, w01), (y1, x0, w10), (y1, x1, w11)


def sample_image(grid: WarpGrid, image: np.ndarray, interp: str = "bilinear"):
    """Warp an image through the grid.

    Returns ``(out, valid)``: invalid cells are zero with the grid mask
    propagated. 8-bit inputs come back as 8-bit (bilinear values rounded).
    """
    image = np.asarray(image)
    _check_src(grid, image)
    channels = image.ndim == 3

    if interp == "nearest":
        iy, ix = _nearest_indices(grid)
        out = image[iy, ix].astype(image.dtype, copy=True)
    elif interp == "bilinear":
        acc = np.zeros(grid.valid.shape + ((image.shape[2],) if channels else ()), dtype=np.float64)
        for ys, xs, w in _bilinear_parts(grid):
            vals = image[ys, xs].astype(np.float64)
            acc += (w[..., None] if channels else w) * vals
        if np.issubdtype(image.dtype, np.integer):
            info = np.iinfo(image.dtype)
            out = np.clip(np.rint(acc), info.min, info.max).astype(image.dtype)
        else:
            out = acc.astype(image.dtype)
    else:
        raise ConfigError(f"unknown interpolation '{interp}'")

    out[~grid.valid] = 0
    return out, grid.valid.copy()


def sample_depth(grid: WarpGrid, depth: DepthMap, interp: str = "nearest") -> DepthMap:
    """Warp a depth map through the grid.

    Nearest sampling carries the source validity of the chosen pixel.
    Bilinear sampling is valid only where every contributing neighbor is
    valid, so discontinuity-straddling cells drop out instead of averaging.
    """
    _check_src(grid, depth.values)
    if interp == "nearest":
        iy, ix = _nearest_indices(grid)
        values = depth.values[iy, ix].astype(np.float64)
        valid = grid.valid & depth.valid[iy, ix]
    elif interp == "bilinear":
        acc = np.zeros(grid.valid.shape, dtype=np.float64)
        weight_ok = np.zeros(grid.valid.shape, dtype=np.float64)
        for ys, xs, w in _bilinear_parts(grid):
            acc += w * np.where(depth.valid[ys, xs], depth.values[ys, xs], 0.0)
            weight_ok += w * depth.valid[ys, xs]
        valid = grid.valid & (weight_ok > 1.0 - 1e-9)
        values = acc
    else:
        raise ConfigError(f"unknown interpolation '{interp}'")
    values[~valid] = 0.0
    return DepthMap(values, valid)


def sample(grid: WarpGrid, src, interp: str | None = None):
    """Dispatch to :func:`sample_depth` for depth maps, else :func:`sample_image`."""
    if isinstance(src, DepthMap):
        return sample_depth(grid, src, interp or "nearest")
    return sample_image(grid, np.asarray(src), interp or "bilinear")


def _resize_grid(src_h: int, src_w: int, out_h: int, out_w: int) -> WarpGrid:
    u = (np.arange(out_w, dtype=np.float64) + 0.5) * (src_w / out_w)
    v = (np.arange(out_h, dtype=np.float64) + 0.5) * (src_h / out_h)
    sx, sy = np.meshgrid(u, v)
    return WarpGrid(sx, sy, np.ones((out_h, out_w), dtype=bool), src_w, src_h)


def resize_dims(ratio: float, height: int, width: int) -> tuple[int, int]:
    """Output dimensions for a resize ratio: round(ratio * dim), minimum 1."""
    return (
        max(int(np.floor(ratio * height + 0.5)), 1),
        max(int(np.floor(ratio * width + 0.5)), 1),
    )


def resize_nearest(array: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Nearest-neighbor resize preserving dtype; used for masks."""
    array = np.asarray(array)
    grid = _resize_grid(array.shape[0], array.shape[1], out_h, out_w)
    iy, ix = _nearest_indices(grid)
    return array[iy, ix]


def multi_resolution_set(
    image: np.ndarray | None,
    depth: DepthMap | None,
    ratios=(1.0, 0.7, 0.4),
    apply_depth_scale: bool = True,
):
    """Resize a patch to each ratio, tracking the metric depth-scale factor.

    Shrinking an image by ``ratio`` makes objects look ``1/ratio`` times
    farther away under a fixed camera model, so each output carries the
    multiplicative depth factor ``src_h / out_h``; by default it is also
    applied to the depth values. Images resize bilinearly, depth and masks
    by nearest neighbor. Returns ``[(image, depth, depth_scale), ...]``.
    """
    ratios = tuple(ratios)
    if not ratios:
        raise ConfigError("ratio list must not be empty")
    for r in ratios:
        if not 0.0 < r <= 1.0:
            raise ConfigError(f"resize ratios must be in (0, 1], got {r}")
    if image is None and depth is None:
        raise ConfigError("multi_resolution_set needs an image or a depth map")

    src_h, src_w = (image.shape[:2] if image is not None else depth.values.shape)
    outputs = []
    for ratio in ratios:
        if ratio == 1.0:
            outputs.append((image, depth, 1.0))
            continue
        out_h, out_w = resize_dims(ratio, src_h, src_w)
        scale = src_h / out_h
        grid = _resize_grid(src_h, src_w, out_h, out_w)
        image_r = sample_image(grid, image, "bilinear")[0] if image is not None else None
        depth_r = None
        if depth is not None:
            depth_r = sample_depth(grid, depth, "nearest")
            if apply_depth_scale:
                depth_r = DepthMap(depth_r.values * scale, depth_r.valid)
        outputs.append((image_r, depth_r, scale))
    return outputs
