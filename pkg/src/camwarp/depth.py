"""Metric-depth scaling rules and 3D up-projection.

Depth maps store per-pixel Euclidean distance from the camera center in
meters, never Z-buffer values: Z-buffers are incompatible with spherical
projections. Conversions to and from Z-maps go through the per-pixel ray
directions (:func:`z_to_euclidean` / :func:`euclidean_to_z`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cameras import CameraModel, ErpCamera, KannalaBrandtCamera, MeiCamera
from .errors import ConfigError, DimensionMismatchError, MissingLutError
from .erp import ErpPatchSpec, erp_pixel_to_spherical
from .geometry import latlon_to_unit
from .lut import LookupTable

# Rays this close to grazing produce unbounded distances that poison any
# downstream metric; mark them invalid instead.
GRAZING_Z = 1e-6


@dataclass(frozen=True)
class DepthMap:
    """2D array of Euclidean distances (meters) with a validity mask.

    Valid entries are finite and positive; the constructor masks out
    anything else. Invalid entries are stored as zero.
    """

    values: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        valid = np.asarray(self.valid, dtype=bool)
        if values.shape != valid.shape or values.ndim != 2:
            raise DimensionMismatchError(
                f"depth values {values.shape} and mask {valid.shape} must be equal 2D shapes"
            )
        valid = valid & np.isfinite(values) & (values > 0.0)
        values = np.where(valid, values, 0.0)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "valid", valid)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_values(cls, values: np.ndarray) -> "DepthMap":
        """Treat positive finite entries as valid (the PFM convention)."""
        values = np.asarray(values, dtype=np.float64)
        return cls(values, np.isfinite(values) & (values > 0.0))


@dataclass(frozen=True)
class PointCloud:
    """3D points in the source camera frame, with optional per-point color."""

    points: np.ndarray
    colors: np.ndarray | None = None

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64).reshape(-1, 3)
        object.__setattr__(self, "points", points)
        if self.colors is not None:
            colors = np.asarray(self.colors, dtype=np.uint8).reshape(-1, 3)
            if colors.shape[0] != points.shape[0]:
                raise DimensionMismatchError(
                    f"{colors.shape[0]} colors for {points.shape[0]} points"
                )
            object.__setattr__(self, "colors", colors)

    def __len__(self) -> int:
        return self.points.shape[0]


def rescale_for_canonical(depth: DepthMap, f: float, f_hat: float) -> DepthMap:
    """Rescale depth for a focal-length change: values multiply by f_hat/f."""
    if not (f > 0 and f_hat > 0):
        raise ConfigError(f"focal lengths must be positive, got f={f}, f_hat={f_hat}")
    ratio = f_hat / f
    return DepthMap(depth.values * ratio, depth.valid)


def rescale_for_resize(u: float, u_prime: float) -> float:
    """Depth factor accompanying a resize from size ``u`` to ``u_prime``.

    Shrinking the image makes objects look farther away under a fixed camera
    model, so depth multiplies by ``u / u_prime``.
    """
    if not (u > 0 and u_prime > 0):
        raise ConfigError(f"sizes must be positive, got {u} -> {u_prime}")
    return u / u_prime


def virtual_focal(erp_height: int) -> float:
    """Equivalent pinhole focal length of one ERP latitude step, in pixels."""
    if erp_height < 2:
        raise ConfigError(f"ERP height must be >= 2, got {erp_height}")
    return 1.0 / math.tan(math.pi / erp_height)


def camera_rays(
    camera: CameraModel,
    width: int | None = None,
    height: int | None = None,
    lut: LookupTable | None = None,
    spec: ErpPatchSpec | None = None,
):
    """Per-pixel unit ray directions for a camera, shape ``(H, W, 3)``.

    Perspective and equirectangular cameras use closed forms; distorted
    models require a lookup table of matching size. With ``spec`` set (ERP
    only) the rays cover the patch placement inside the full ERP space,
    expressed in the ERP sphere frame.
    """
    if spec is not None:
        if not isinstance(camera, ErpCamera):
            raise ConfigError("patch placement only applies to the ERP model")
        u, v = np.meshgrid(
            np.arange(spec.patch_w, dtype=np.float64) + 0.5,
            np.arange(spec.patch_h, dtype=np.float64) + 0.5,
        )
        lat, lon = erp_pixel_to_spherical(spec, u, v)
        valid = np.abs(lat) <= np.pi / 2
        return latlon_to_unit(lat, lon), valid

    width = width if width is not None else camera.width
    height = height if height is not None else camera.height

    if isinstance(camera, (KannalaBrandtCamera, MeiCamera)):
        if lut is None:
            raise MissingLutError(
                f"{type(camera).__name__} rays require a lookup table"
            )
        if (lut.width, lut.height) != (width, height):
            raise DimensionMismatchError(
                f"lookup table is {lut.width}x{lut.height}, expected {width}x{height}"
            )
        return lut.rays.copy(), lut.valid.copy()

    u, v = np.meshgrid(
        np.arange(width, dtype=np.float64) + 0.5,
        np.arange(height, dtype=np.float64) + 0.5,
    )
    return camera.unproject(np.stack([u, v], axis=-1))


def z_to_euclidean(z_values: np.ndarray, rays: np.ndarray | LookupTable, valid: np.ndarray | None = None) -> DepthMap:
    """Convert a Z-buffer map to Euclidean distances via per-pixel rays.

    ``D = Z / z`` with ``z`` the ray's optical-axis component; the rays must
    be the camera's true incoming directions. Grazing rays are invalidated.
    """
    z_values = np.asarray(z_values, dtype=np.float64)
    if isinstance(rays, LookupTable):
        ray_valid = rays.valid
        rays = rays.rays
    else:
        rays = np.asarray(rays, dtype=np.float64)
        ray_valid = np.ones(rays.shape[:-1], dtype=bool)
    if rays.shape[:-1] != z_values.shape:
        raise DimensionMismatchError(
            f"ray grid {rays.shape[:-1]} does not match Z map {z_values.shape}"
        )
    z_comp = rays[..., 2]
    ok = ray_valid & (z_comp > GRAZING_Z)
    if valid is not None:
        ok = ok & np.asarray(valid, dtype=bool)
    values = np.where(ok, z_values / np.where(ok, z_comp, 1.0), 0.0)
    return DepthMap(values, ok)


def euclidean_to_z(depth: DepthMap, rays: np.ndarray | LookupTable):
    """Inverse of :func:`z_to_euclidean`: ``Z = D * z``. Returns ``(z_map, valid)``."""
    if isinstance(rays, LookupTable):
        ray_valid = rays.valid
        rays = rays.rays
    else:
        rays = np.asarray(rays, dtype=np.float64)
        ray_valid = np.ones(rays.shape[:-1], dtype=bool)
    if rays.shape[:-1] != depth.values.shape:
        raise DimensionMismatchError(
            f"ray grid {rays.shape[:-1]} does not match depth map {depth.values.shape}"
        )
    valid = depth.valid & ray_valid
    z_map = np.where(valid, depth.values * rays[..., 2], 0.0)
    return z_map, valid


def unproject_depth(
    depth: DepthMap,
    camera: CameraModel,
    lut: LookupTable | None = None,
    spec: ErpPatchSpec | None = None,
    image: np.ndarray | None = None,
) -> PointCloud:
    """Lift a depth map into a 3D point cloud: ``point = ray * distance``.

    For the ERP model ``spec`` places the patch inside the full ERP space;
    distorted models need a lookup table. An optional image of matching size
    colors the points.
    """
    rays, ray_valid = camera_rays(
        camera, width=depth.width, height=depth.height, lut=lut, spec=spec
    )
    if rays.shape[:2] != depth.values.shape:
        raise DimensionMismatchError(
            f"camera rays {rays.shape[:2]} do not match depth map {depth.values.shape}"
        )
    mask = depth.valid & ray_valid
    points = rays[mask] * depth.values[mask][:, None]
    colors = None
    if image is not None:
        image = np.asarray(image)
        if image.shape[:2] != depth.values.shape:
            raise DimensionMismatchError(
                f"image {image.shape[:2]} does not match depth map {depth.values.shape}"
            )
        colors = image[mask]
    return PointCloud(points, colors)
