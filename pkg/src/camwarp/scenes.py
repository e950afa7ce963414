"""Analytic test scenes with exact ground-truth distance.

Every scene is intersected in closed form, so rendered depth maps are exact
to float precision and serve as the verification oracle for warps and
conversions. The camera sits at the origin with rotation-only poses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .cameras import CameraModel
from .depth import DepthMap, camera_rays
from .errors import ConfigError
from .geometry import unit_to_latlon
from .lut import LookupTable


@dataclass(frozen=True)
class ConcentricSphere:
    """Sphere centered on the camera; every ray hits at the radius."""

    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ConfigError(f"sphere radius must be positive, got {self.radius}")

    def hit_distance(self, rays: np.ndarray):
        n = rays.shape[:-1]
        return np.full(n, self.radius, dtype=np.float64), np.ones(n, dtype=bool)

    def albedo(self, rays: np.ndarray, points: np.ndarray) -> np.ndarray:
        return _direction_gradient(rays)


@dataclass(frozen=True)
class CheckerSphere:
    """Concentric sphere carrying an angular checkerboard texture."""

    radius: float
    period: float

    def __post_init__(self):
        if not (self.radius > 0 and self.period > 0):
            raise ConfigError("checker sphere needs positive radius and period")

    def hit_distance(self, rays: np.ndarray):
        n = rays.shape[:-1]
        return np.full(n, self.radius, dtype=np.float64), np.ones(n, dtype=bool)

    def albedo(self, rays: np.ndarray, points: np.ndarray) -> np.ndarray:
        lat, lon = unit_to_latlon(rays)
        parity = (np.floor(lat / self.period) + np.floor(lon / self.period)) % 2
        shade = np.where(parity == 0, 0.9, 0.15)
        return np.repeat(shade[..., None], 3, axis=-1)


@dataclass(frozen=True)
class Plane:
    """The plane ``normal . x = offset``; rays heading away never hit."""

    normal: tuple[float, float, float]
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=np.float64)
        norm = np.linalg.norm(n)
        if norm <= 0 or not self.offset > 0:
            raise ConfigError("plane needs a nonzero normal and positive offset")
        object.__setattr__(self, "normal", tuple(n / norm))

    def hit_distance(self, rays: np.ndarray):
        n = np.asarray(self.normal)
        toward = rays @ n
        valid = toward > 1e-9
        dist = np.where(valid, self.offset / np.where(valid, toward, 1.0), 0.0)
        return dist, valid

    def albedo(self, rays: np.ndarray, points: np.ndarray) -> np.ndarray:
        # Checker on the two in-plane coordinates with the largest spread.
        n = np.asarray(self.normal)
        axes = np.argsort(np.abs(n))[:2]
        parity = (np.floor(points[..., axes[0]]) + np.floor(points[..., axes[1]])) % 2
        shade = np.where(parity == 0, 0.85, 0.25)
        return np.repeat(shade[..., None], 3, axis=-1)


@dataclass(frozen=True)
class AxisBox:
    """Axis-aligned box centered at the origin, seen from the inside."""

    half_extents: tuple[float, float, float]

    def __post_init__(self):
        h = np.asarray(self.half_extents, dtype=np.float64)
        if h.shape != (3,) or not np.all(h > 0):
            raise ConfigError("box needs three positive half-extents")
        object.__setattr__(self, "half_extents", tuple(float(x) for x in h))

    def hit_distance(self, rays: np.ndarray):
        h = np.asarray(self.half_extents)
        with np.errstate(divide="ignore"):
            t_axis = h / np.abs(rays)
        dist = np.min(t_axis, axis=-1)
        valid = np.isfinite(dist)
        return np.where(valid, dist, 0.0), valid

    def albedo(self, rays: np.ndarray, points: np.ndarray) -> np.ndarray:
        # Color by exit face so edges are visible, plus a mild gradient.
        h = np.asarray(self.half_extents)
        with np.errstate(divide="ignore"):
            face = np.argmin(h / np.abs(rays), axis=-1)
        base = np.array([[0.85, 0.35, 0.3], [0.3, 0.8, 0.35], [0.3, 0.4, 0.85]])
        color = base[face]
        color *= (0.6 + 0.4 * np.abs(points / h).min(axis=-1))[..., None]
        return color


Scene = Union[ConcentricSphere, CheckerSphere, Plane, AxisBox]


def _direction_gradient(rays: np.ndarray) -> np.ndarray:
    """Smooth RGB gradient from ray direction; C1 over the whole sphere."""
    return 0.5 * (rays + 1.0)


def render(
    scene: Scene,
    camera: CameraModel,
    width: int | None = None,
    height: int | None = None,
    pose: np.ndarray | None = None,
    lut: LookupTable | None = None,
    spec=None,
    shading: str = "scene",
):
    """Render a scene to ``(image, depth)`` with exact Euclidean distances.

    ``pose`` is an optional camera-to-world rotation (camera stays at the
    origin). ``shading="smooth"`` overrides the scene's own albedo with a
    direction gradient, useful where interpolation-tolerance tests need
    smooth content. Distorted cameras need a lookup table for their rays.
    """
    rays, valid = camera_rays(camera, width=width, height=height, lut=lut, spec=spec)
    if pose is not None:
        pose = np.asarray(pose, dtype=np.float64)
        if pose.shape != (3, 3):
            raise ConfigError(f"pose must be a 3x3 rotation, got {pose.shape}")
        world = rays @ pose.T
    else:
        world = rays

    dist, hit = scene.hit_distance(world)
    valid = valid & hit
    depth = DepthMap(np.where(valid, dist, 0.0), valid)

    if shading == "smooth":
        colors = _direction_gradient(world)
    elif shading == "scene":
        points = world * np.where(valid, dist, 0.0)[..., None]
        colors = scene.albedo(world, points)
    else:
        raise ConfigError(f"unknown shading '{shading}'")
    image = np.clip(np.rint(colors * 255.0), 0, 255).astype(np.uint8)
    image[~valid] = 0
    return image, depth


def scene_from_dict(cfg: dict) -> Scene:
    """Build a scene from its JSON config (same namespace as cameras)."""
    if not isinstance(cfg, dict) or "scene" not in cfg:
        raise ConfigError("scene config must be an object with a 'scene' field")
    kind = cfg["scene"]
    try:
        if kind == "sphere":
            return ConcentricSphere(radius=float(cfg["radius"]))
        if kind == "checker_sphere":
            return CheckerSphere(radius=float(cfg["radius"]), period=float(cfg["period"]))
        if kind == "plane":
            return Plane(normal=tuple(cfg["normal"]), offset=float(cfg["offset"]))
        if kind == "box":
            return AxisBox(half_extents=tuple(cfg["half_extents"]))
    except KeyError as exc:
        raise ConfigError(f"scene config missing required field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"scene config has malformed value: {exc}") from exc
    raise ConfigError(f"unknown scene '{kind}'")
