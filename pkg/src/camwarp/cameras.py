"""Forward projection (3D ray -> pixel) for the supported camera models.

Camera frame convention: +z along the optical axis, +x right, +y down. The
equirectangular model is aligned so that ``lat = lon = 0`` maps to +z.

Pixel coordinates are continuous, with pixel centers at integer + 0.5, so an
image of width W spans ``u`` in ``[0, W]``. Projection methods take unit rays
of shape ``(..., 3)`` and return ``(uv, valid)`` where ``uv`` has shape
``(..., 2)``. Rays outside a model's projectable domain are flagged invalid
rather than raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np

from .errors import ConfigError, MissingLutError
from .geometry import COS_C_MIN, HALF_PI, TWO_PI

if TYPE_CHECKING:
    from .lut import LookupTable

# Default cap on the incidence angle accepted by the Kannala-Brandt model.
# The distortion polynomial in theta is not monotonic for arbitrary
# coefficients; anything past 90 degrees plus a small margin is rejected
# unless the camera is configured otherwise.
KB_MAX_THETA_DEFAULT = HALF_PI + 0.1


@dataclass(frozen=True)
class Intrinsics:
    """Pinhole intrinsics: focal lengths, principal point, skew."""

    fx: float
    fy: float
    cx: float
    cy: float
    alpha: float = 0.0

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise ConfigError(f"focal lengths must be positive, got fx={self.fx}, fy={self.fy}")

    def apply(self, x_d, y_d):
        u = self.fx * (x_d + self.alpha * y_d) + self.cx
        v = self.fy * y_d + self.cy
        return u, v


@dataclass(frozen=True)
class KbDistortion:
    """Radial polynomial coefficients of the Kannala-Brandt model."""

    k1: float = 0.0
    k2: float = 0.0
    k3: float = 0.0
    k4: float = 0.0

    def theta_d(self, theta):
        t2 = theta * theta
        return theta * (1.0 + t2 * (self.k1 + t2 * (self.k2 + t2 * (self.k3 + t2 * self.k4))))


@dataclass(frozen=True)
class MeiDistortion:
    """Unified-model parameters: sphere shift, radial and tangential terms."""

    xi: float = 0.0
    k1: float = 0.0
    k2: float = 0.0
    p1: float = 0.0
    p2: float = 0.0

    def __post_init__(self):
        if self.xi < 0:
            raise ConfigError(f"sphere-shift parameter must be >= 0, got {self.xi}")


def _check_size(width: int, height: int):
    if width < 1 or height < 1:
        raise ConfigError(f"image size must be positive, got {width}x{height}")


@dataclass(frozen=True)
class PerspectiveCamera:
    """Pinhole camera, projecting tangent-plane coordinates directly."""

    intrinsics: Intrinsics
    width: int
    height: int

    def __post_init__(self):
        _check_size(self.width, self.height)

    @property
    def vertical_fov(self) -> float:
        return 2.0 * math.atan(self.height / (2.0 * self.intrinsics.fy))

    def project(self, rays: np.ndarray):
        rays = np.asarray(rays, dtype=np.float64)
        x, y, z = rays[..., 0], rays[..., 1], rays[..., 2]
        valid = z > COS_C_MIN
        safe_z = np.where(valid, z, 1.0)
        u, v = self.intrinsics.apply(x / safe_z, y / safe_z)
        return np.stack([u, v], axis=-1), valid

    def unproject(self, uv: np.ndarray, lut: "LookupTable | None" = None):
        uv = np.asarray(uv, dtype=np.float64)
        intr = self.intrinsics
        y_t = (uv[..., 1] - intr.cy) / intr.fy
        x_t = (uv[..., 0] - intr.cx) / intr.fx - intr.alpha * y_t
        rays = np.stack([x_t, y_t, np.ones_like(x_t)], axis=-1)
        rays /= np.linalg.norm(rays, axis=-1, keepdims=True)
        return rays, np.ones(uv.shape[:-1], dtype=bool)


@dataclass(frozen=True)
class KannalaBrandtCamera:
    """Fisheye camera with a polynomial-in-theta radial distortion.

    Projection runs on the pre-division sphere vector: with a unit ray
    ``(x, y, z)`` the radius ``hypot(x, y)`` equals ``sin(theta)``, so the
    ratios ``x/r`` and ``y/r`` stay finite all the way to 180 degrees, which
    a naive tangent-plane formulation cannot do.
    """

    intrinsics: Intrinsics
    distortion: KbDistortion
    width: int
    height: int
    max_theta: float = KB_MAX_THETA_DEFAULT

    def __post_init__(self):
        _check_size(self.width, self.height)
        if not 0 < self.max_theta <= np.pi:
            raise ConfigError(f"max_theta must be in (0, pi], got {self.max_theta}")

    @property
    def vertical_fov(self) -> float:
        return _distorted_vfov(self)

    def project(self, rays: np.ndarray):
        rays = np.asarray(rays, dtype=np.float64)
        x, y, z = rays[..., 0], rays[..., 1], rays[..., 2]
        r = np.hypot(x, y)
        theta = np.arctan2(r, z)
        valid = theta <= self.max_theta
        theta_d = self.distortion.theta_d(theta)
        on_axis = r <= 1e-12
        scale = np.where(on_axis, 1.0, theta_d / np.where(on_axis, 1.0, r))
        u, v = self.intrinsics.apply(scale * x, scale * y)
        return np.stack([u, v], axis=-1), valid

    def unproject(self, uv: np.ndarray, lut: "LookupTable | None" = None):
        if lut is None:
            raise MissingLutError("Kannala-Brandt unprojection requires a lookup table")
        return lut.sample(uv)


def kb_project_naive(camera: KannalaBrandtCamera, rays: np.ndarray):
    """Reference tangent-plane route through the Kannala-Brandt model.

    Divides by ``cos(c)`` first, so it breaks down near 90 degrees off-axis.
    Kept as an independent path for verifying the stable route; not used by
    any pipeline.
    """
    rays = np.asarray(rays, dtype=np.float64)
    x, y, z = rays[..., 0], rays[..., 1], rays[..., 2]
    valid = z > COS_C_MIN
    safe_z = np.where(valid, z, 1.0)
    x_t, y_t = x / safe_z, y / safe_z
    r = np.hypot(x_t, y_t)
    theta = np.arctan(r)
    valid &= theta <= camera.max_theta
    theta_d = camera.distortion.theta_d(theta)
    on_axis = r <= 1e-12
    scale = np.where(on_axis, 1.0, theta_d / np.where(on_axis, 1.0, r))
    u, v = camera.intrinsics.apply(scale * x_t, scale * y_t)
    return np.stack([u, v], axis=-1), valid


@dataclass(frozen=True)
class MeiCamera:
    """Unified omnidirectional camera: projection through a shifted sphere.

    Radial distortion is applied to the sphere-projected point first, then
    the tangential terms (which reuse the undistorted point's squared radius),
    then the pinhole intrinsics.
    """

    intrinsics: Intrinsics
    distortion: MeiDistortion
    width: int
    height: int

    def __post_init__(self):
        _check_size(self.width, self.height)

    @property
    def vertical_fov(self) -> float:
        return _distorted_vfov(self)

    @property
    def max_theta(self) -> float:
        # Rays with z + xi <= 0 cannot project; cap just inside that bound.
        xi = self.distortion.xi
        if xi >= 1.0:
            return np.pi - 1e-6
        return math.acos(-xi) - 1e-6

    def project(self, rays: np.ndarray):
        rays = np.asarray(rays, dtype=np.float64)
        d = self.distortion
        x, y, z = rays[..., 0], rays[..., 1], rays[..., 2]
        denom = z + d.xi
        valid = denom > COS_C_MIN
        safe = np.where(valid, denom, 1.0)
        p_u = x / safe
        p_v = y / safe
        rho2 = p_u * p_u + p_v * p_v
        radial = 1.0 + rho2 * (d.k1 + rho2 * d.k2)
        p_u = p_u * radial
        p_v = p_v * radial
        x_d = p_u + 2.0 * d.p1 * p_u * p_v + d.p2 * (rho2 + 2.0 * p_u * p_u)
        y_d = p_v + d.p1 * (rho2 + 2.0 * p_v * p_v) + 2.0 * d.p2 * p_u * p_v
        u, v = self.intrinsics.apply(x_d, y_d)
        return np.stack([u, v], axis=-1), valid

    def unproject(self, uv: np.ndarray, lut: "LookupTable | None" = None):
        if lut is None:
            raise MissingLutError("MEI unprojection requires a lookup table")
        return lut.sample(uv)


@dataclass(frozen=True)
class ErpCamera:
    """Full equirectangular camera; the image height is its only parameter.

    The image spans 360 degrees of longitude and 180 degrees of latitude, so
    the width is implicitly twice the height and every unit ray projects to a
    valid pixel.
    """

    erp_height: int

    def __post_init__(self):
        if self.erp_height < 2:
            raise ConfigError(f"ERP height must be >= 2, got {self.erp_height}")

    @property
    def height(self) -> int:
        return self.erp_height

    @property
    def width(self) -> int:
        return 2 * self.erp_height

    @property
    def vertical_fov(self) -> float:
        return np.pi

    def project(self, rays: np.ndarray):
        rays = np.asarray(rays, dtype=np.float64)
        lat = np.arcsin(np.clip(rays[..., 1], -1.0, 1.0))
        lon = np.arctan2(rays[..., 0], rays[..., 2])
        u = (lon + np.pi) * (self.width / TWO_PI)
        v = (lat + HALF_PI) * (self.height / np.pi)
        return np.stack([u, v], axis=-1), np.ones(rays.shape[:-1], dtype=bool)

    def unproject(self, uv: np.ndarray, lut: "LookupTable | None" = None):
        uv = np.asarray(uv, dtype=np.float64)
        lon = uv[..., 0] * (TWO_PI / self.width) - np.pi
        lat = uv[..., 1] * (np.pi / self.height) - HALF_PI
        cos_lat = np.cos(lat)
        rays = np.stack(
            [cos_lat * np.sin(lon), np.sin(lat), cos_lat * np.cos(lon)], axis=-1
        )
        return rays, np.ones(uv.shape[:-1], dtype=bool)


CameraModel = Union[PerspectiveCamera, KannalaBrandtCamera, MeiCamera, ErpCamera]

_MODEL_NAMES = {
    PerspectiveCamera: "perspective",
    KannalaBrandtCamera: "kb",
    MeiCamera: "mei",
    ErpCamera: "erp",
}


def _distorted_vfov(camera) -> float:
    """Vertical FoV of a distorted model, found by bisecting the downward and
    upward principal rays against the image's bottom and top edges."""

    def v_of(theta: float) -> float:
        ray = np.array([0.0, math.sin(theta), math.cos(theta)])
        uv, ok = camera.project(ray[None])
        return float(uv[0, 1]) if ok[0] else math.inf

    def edge_theta(target_v: float, downward: bool) -> float:
        lo, hi = 0.0, camera.max_theta
        sign = 1.0 if downward else -1.0

        def offset(theta):
            value = v_of(sign * theta)
            return (value - target_v) if downward else (target_v - value)

        if offset(hi) <= 0.0:
            return hi  # image edge lies beyond the projectable domain
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if offset(mid) > 0.0:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    return edge_theta(float(camera.height), True) + edge_theta(0.0, False)


def camera_to_dict(camera: CameraModel) -> dict:
    """Serialize a camera to the JSON config schema (angles in degrees)."""
    if isinstance(camera, ErpCamera):
        return {"model": "erp", "height": camera.erp_height}
    intr = camera.intrinsics
    out = {
        "model": _MODEL_NAMES[type(camera)],
        "width": camera.width,
        "height": camera.height,
        "fx": intr.fx,
        "fy": intr.fy,
        "cx": intr.cx,
        "cy": intr.cy,
        "alpha": intr.alpha,
    }
    if isinstance(camera, KannalaBrandtCamera):
        d = camera.distortion
        out.update(k1=d.k1, k2=d.k2, k3=d.k3, k4=d.k4)
        out["max_theta_deg"] = math.degrees(camera.max_theta)
    elif isinstance(camera, MeiCamera):
        d = camera.distortion
        out.update(xi=d.xi, k1=d.k1, k2=d.k2, p1=d.p1, p2=d.p2)
    return out


def camera_from_dict(cfg: dict) -> CameraModel:
    """Build a camera from the JSON config schema (angles in degrees)."""
    if not isinstance(cfg, dict) or "model" not in cfg:
        raise ConfigError("camera config must be an object with a 'model' field")
    model = cfg["model"]
    try:
        if model == "erp":
            return ErpCamera(erp_height=int(cfg["height"]))
        intr = Intrinsics(
            fx=float(cfg["fx"]),
            fy=float(cfg["fy"]),
            cx=float(cfg["cx"]),
            cy=float(cfg["cy"]),
            alpha=float(cfg.get("alpha", 0.0)),
        )
        width = int(cfg["width"])
        height = int(cfg["height"])
        if model == "perspective":
            return PerspectiveCamera(intr, width, height)
        if model == "kb":
            dist = KbDistortion(
                k1=float(cfg.get("k1", 0.0)),
                k2=float(cfg.get("k2", 0.0)),
                k3=float(cfg.get("k3", 0.0)),
                k4=float(cfg.get("k4", 0.0)),
            )
            max_theta = math.radians(float(cfg["max_theta_deg"])) if "max_theta_deg" in cfg else KB_MAX_THETA_DEFAULT
            return KannalaBrandtCamera(intr, dist, width, height, max_theta=max_theta)
        if model == "mei":
            dist = MeiDistortion(
                xi=float(cfg.get("xi", 0.0)),
                k1=float(cfg.get("k1", 0.0)),
                k2=float(cfg.get("k2", 0.0)),
                p1=float(cfg.get("p1", 0.0)),
                p2=float(cfg.get("p2", 0.0)),
            )
            return MeiCamera(intr, dist, width, height)
    except KeyError as exc:
        raise ConfigError(f"camera config missing required field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"camera config has malformed value: {exc}") from exc
    raise ConfigError(f"unknown camera model '{model}'")
