"""Pitch-aware conversion between camera images and equirectangular patches.

An equirectangular (ERP) space of height ``H_E`` (width ``2*H_E``) has a
fixed per-pixel angular step of ``pi/H_E`` in latitude and ``2*pi/(2*H_E)``
in longitude. A patch is a window of that space centered on a latitude and
longitude; placing a camera's content at ``center_lat = -pitch`` simulates
the high-distortion regions that only large-FoV cameras observe.

All conversions compile to a :class:`WarpGrid`: per-target-pixel floating
point source coordinates plus a validity mask, applied by
:mod:`camwarp.resample`.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .cameras import CameraModel, ErpCamera
from .errors import ConfigError
from .geometry import COS_C_MIN, HALF_PI, gnomonic_forward, gnomonic_inverse


@dataclass(frozen=True)
class ErpPatchSpec:
    """Placement of a patch inside a full ERP space.

    ``erp_height`` fixes the angular resolution; ``patch_h``/``patch_w`` give
    the patch size in pixels and ``center_lat``/``center_lon`` its center on
    the sphere (radians).
    """

    erp_height: int
    patch_h: int
    patch_w: int
    center_lat: float = 0.0
    center_lon: float = 0.0

    def __post_init__(self):
        if self.erp_height < 1:
            raise ConfigError(f"ERP height must be positive, got {self.erp_height}")
        if not 0 < self.patch_h <= self.erp_height:
            raise ConfigError(
                f"patch height {self.patch_h} outside (0, {self.erp_height}]"
            )
        if not 0 < self.patch_w <= self.erp_width:
            raise ConfigError(
                f"patch width {self.patch_w} outside (0, {self.erp_width}]"
            )
        if abs(self.center_lat) > HALF_PI:
            raise ConfigError(f"|center latitude| must be <= pi/2, got {self.center_lat}")

    @property
    def erp_width(self) -> int:
        return 2 * self.erp_height

    @property
    def is_full_width(self) -> bool:
        return self.patch_w == self.erp_width

    @property
    def vertical_fov(self) -> float:
        """Angular height of the patch, ``patch_h * pi / erp_height``."""
        return self.patch_h * np.pi / self.erp_height

    @classmethod
    def full(cls, erp_height: int) -> "ErpPatchSpec":
        return cls(erp_height, erp_height, 2 * erp_height)


@dataclass(frozen=True)
class AugmentParams:
    """Tangent-plane augmentation plus a latitude jitter.

    Scale, rotation, and translation act on the tangent coordinates as
    ``p' = scale * (R(rotation) @ p + translation)``; ``pitch_jitter`` is
    added to the patch's center latitude before any projection.
    """

    scale: float = 1.0
    rotation: float = 0.0
    translation: tuple[float, float] = (0.0, 0.0)
    pitch_jitter: float = 0.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ConfigError(f"augmentation scale must be positive, got {self.scale}")

    @property
    def is_identity_tangent(self) -> bool:
        """True when the tangent-plane part is a no-op (jitter may be set)."""
        return (
            self.scale == 1.0
            and self.rotation == 0.0
            and self.translation == (0.0, 0.0)
        )

    def apply(self, x_t, y_t):
        cos_r = np.cos(self.rotation)
        sin_r = np.sin(self.rotation)
        tx, ty = self.translation
        x_a = self.scale * (cos_r * x_t - sin_r * y_t + tx)
        y_a = self.scale * (sin_r * x_t + cos_r * y_t + ty)
        return x_a, y_a


IDENTITY_AUGMENT = AugmentParams()


@dataclass(frozen=True)
class WarpGrid:
    """Per-target-pixel source coordinates plus validity.

    ``src_x``/``src_y`` are continuous source pixel coordinates (centers at
    integer + 0.5) of shape ``(target_h, target_w)``. Valid cells lie inside
    ``[0, src_width] x [0, src_height]``. ``wrap_x`` marks sources that are
    360-degree periodic, so sampling wraps columns at the seam.
    """

    src_x: np.ndarray
    src_y: np.ndarray
    valid: np.ndarray
    src_width: int
    src_height: int
    wrap_x: bool = False

    def __post_init__(self):
        if not (self.src_x.shape == self.src_y.shape == self.valid.shape):
            raise ConfigError("warp grid field shapes disagree")

    @property
    def target_h(self) -> int:
        return self.src_x.shape[0]

    @property
    def target_w(self) -> int:
        return self.src_x.shape[1]


def erp_pixel_to_spherical(spec: ErpPatchSpec, u_e, v_e):
    """Map continuous patch pixel coordinates to ``(lat, lon)``.

    Uses the full ERP space's per-pixel angular step, so a patch samples the
    sphere at exactly the resolution of the surrounding ERP image. The
    returned latitude is not clamped; patches that overrun a pole yield
    out-of-range latitudes that callers mask.
    """
    u_e = np.asarray(u_e, dtype=np.float64)
    v_e = np.asarray(v_e, dtype=np.float64)
    lon = (2.0 * np.pi / spec.erp_width) * (u_e - spec.patch_w / 2.0) + spec.center_lon
    lat = (np.pi / spec.erp_height) * (v_e - spec.patch_h / 2.0) + spec.center_lat
    return lat, lon


def spherical_to_erp_pixel(spec: ErpPatchSpec, lat, lon):
    """Inverse of :func:`erp_pixel_to_spherical`; expects unwrapped inputs.

    The longitude offset ``lon - center_lon`` must already lie in
    ``(-pi, pi]`` (true for :func:`camwarp.geometry.gnomonic_inverse` output).
    """
    lat = np.asarray(lat, dtype=np.float64)
    lon = np.asarray(lon, dtype=np.float64)
    u_e = (lon - spec.center_lon) * (spec.erp_width / (2.0 * np.pi)) + spec.patch_w / 2.0
    v_e = (lat - spec.center_lat) * (spec.erp_height / np.pi) + spec.patch_h / 2.0
    return u_e, v_e


def fov_align_scale(camera_vfov: float, spec: ErpPatchSpec) -> float:
    """Scale factor that makes a camera's content fill the patch height."""
    if not camera_vfov > 0:
        raise ConfigError(f"camera vertical FoV must be positive, got {camera_vfov}")
    return camera_vfov / spec.vertical_fov


def _pixel_centers(height: int, width: int):
    u = np.arange(width, dtype=np.float64) + 0.5
    v = np.arange(height, dtype=np.float64) + 0.5
    return np.meshgrid(u, v)


def _in_bounds(uv, width: int, height: int):
    u, v = uv[..., 0], uv[..., 1]
    return (u >= 0.0) & (u <= width) & (v >= 0.0) & (v <= height)


def build_image_to_erp_grid(
    spec: ErpPatchSpec,
    camera: CameraModel,
    aug: AugmentParams = IDENTITY_AUGMENT,
) -> WarpGrid:
    """Compile the grid that warps a camera image into an ERP patch.

    Per target pixel: patch coordinate -> spherical coordinate -> gnomonic
    projection about the (jittered) patch center -> tangent-plane
    augmentation -> camera distortion + projection -> source pixel.

    When the tangent-plane augmentation is the identity the sphere vector is
    fed to the camera directly, which keeps 180-degree fisheye content valid;
    otherwise pixels on or behind the tangent horizon are masked before the
    augmentation is applied.
    """
    if aug.pitch_jitter != 0.0:
        spec = dataclasses.replace(spec, center_lat=spec.center_lat + aug.pitch_jitter)

    u_e, v_e = _pixel_centers(spec.patch_h, spec.patch_w)
    lat, lon = erp_pixel_to_spherical(spec, u_e, v_e)
    on_sphere = np.abs(lat) <= HALF_PI
    fwd = gnomonic_forward(lat, lon, spec.center_lat, spec.center_lon)

    if aug.is_identity_tangent:
        rays = fwd.sphere
        valid = on_sphere.copy()
    else:
        valid = on_sphere & fwd.tangent_valid
        x_a, y_a = aug.apply(np.where(valid, fwd.x_t, 0.0), np.where(valid, fwd.y_t, 0.0))
        cos_c = 1.0 / np.sqrt(1.0 + x_a * x_a + y_a * y_a)
        rays = np.stack([x_a * cos_c, y_a * cos_c, cos_c], axis=-1)

    uv, proj_ok = camera.project(rays)
    valid &= proj_ok & _in_bounds(uv, camera.width, camera.height)
    return WarpGrid(
        src_x=uv[..., 0],
        src_y=uv[..., 1],
        valid=valid,
        src_width=camera.width,
        src_height=camera.height,
        wrap_x=isinstance(camera, ErpCamera),
    )


def build_erp_to_image_grid(
    spec: ErpPatchSpec,
    camera: CameraModel,
    lut=None,
) -> WarpGrid:
    """Compile the grid that maps an ERP patch back into a camera image.

    Per target (camera) pixel: unproject to a ray (closed-form, or via the
    lookup table for distorted models) -> tangent coordinates -> inverse
    gnomonic about the patch center -> patch pixel. Rays at or behind the
    tangent horizon have no tangent coordinates and are masked.
    """
    u, v = _pixel_centers(camera.height, camera.width)
    uv = np.stack([u, v], axis=-1)
    rays, valid = camera.unproject(uv, lut)

    z = rays[..., 2]
    front = z > COS_C_MIN
    valid = valid & front
    safe_z = np.where(front, z, 1.0)
    x_t = rays[..., 0] / safe_z
    y_t = rays[..., 1] / safe_z

    lat, lon = gnomonic_inverse(x_t, y_t, spec.center_lat, spec.center_lon)
    # gnomonic_inverse wraps lon; undo the wrap relative to the patch center
    # so the offset stays in (-pi, pi] for the pixel mapping.
    dlon = np.mod(lon - spec.center_lon + np.pi, 2.0 * np.pi) - np.pi
    u_e = dlon * (spec.erp_width / (2.0 * np.pi)) + spec.patch_w / 2.0
    v_e = (lat - spec.center_lat) * (spec.erp_height / np.pi) + spec.patch_h / 2.0

    valid &= (u_e >= 0.0) & (u_e <= spec.patch_w) & (v_e >= 0.0) & (v_e <= spec.patch_h)
    return WarpGrid(
        src_x=np.where(valid, u_e, 0.0),
        src_y=np.where(valid, v_e, 0.0),
        valid=valid,
        src_width=spec.patch_w,
        src_height=spec.patch_h,
        wrap_x=spec.is_full_width,
    )
