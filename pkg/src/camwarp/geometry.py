"""Closed-form spherical and gnomonic projection math.

Conventions used everywhere in this package:

- ``lat`` is the elevation angle in radians, in ``[-pi/2, pi/2]``, and
  increases toward the camera-frame +y axis (downward in image terms).
- ``lon`` is the azimuth angle in radians, normalized into ``[-pi, pi)``,
  and increases toward the camera-frame +x axis (rightward).
- The unit-sphere point for ``(lat, lon)`` is
  ``(cos(lat)sin(lon), sin(lat), cos(lat)cos(lon))`` so that
  ``lat = lon = 0`` maps to the +z axis.
- All angles are radians. Degrees appear only at CLI/config boundaries.

The gnomonic projection about a tangent center ``(center_lat, center_lon)``
produces tangent-plane coordinates ``(x_t, y_t)`` and the pre-division sphere
vector ``(x_bar, y_bar, cos_c)``. The sphere vector is exactly the point's
unit vector expressed in the tangent frame, which makes it the numerically
stable representation for rays up to (and beyond) 90 degrees off-axis.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

TWO_PI = 2.0 * np.pi
HALF_PI = 0.5 * np.pi

# Tangent coordinates are undefined at or behind the tangent horizon. Slightly
# above zero so 180-degree content remains representable via the sphere vector
# without overflowing the division.
COS_C_MIN = 1e-12


class GnomonicResult(NamedTuple):
    """Output of :func:`gnomonic_forward`.

    ``x_t``/``y_t`` are only meaningful where ``tangent_valid`` is True; the
    sphere vector ``sphere`` (shape ``(..., 3)``) is defined for every input.
    """

    x_t: np.ndarray
    y_t: np.ndarray
    sphere: np.ndarray
    tangent_valid: np.ndarray


def normalize_lon(lon):
    """Wrap longitudes into ``[-pi, pi)``."""
    return np.mod(np.asarray(lon, dtype=np.float64) + np.pi, TWO_PI) - np.pi


def latlon_to_unit(lat, lon) -> np.ndarray:
    """Unit vectors (shape ``(..., 3)``) for latitude/longitude arrays."""
    lat = np.asarray(lat, dtype=np.float64)
    lon = np.asarray(lon, dtype=np.float64)
    cos_lat = np.cos(lat)
    return np.stack(
        [cos_lat * np.sin(lon), np.sin(lat), cos_lat * np.cos(lon)], axis=-1
    )


def unit_to_latlon(v: np.ndarray):
    """Inverse of :func:`latlon_to_unit` for unit vectors of shape ``(..., 3)``."""
    v = np.asarray(v, dtype=np.float64)
    lat = np.arcsin(np.clip(v[..., 1], -1.0, 1.0))
    lon = np.arctan2(v[..., 0], v[..., 2])
    return lat, lon


def angular_cos(lat, lon, center_lat, center_lon):
    """Cosine of the great-circle angle between points and a center.

    Total function; the result lies in ``[-1, 1]`` and is symmetric in its
    two arguments.
    """
    lat = np.asarray(lat, dtype=np.float64)
    lon = np.asarray(lon, dtype=np.float64)
    return np.sin(center_lat) * np.sin(lat) + np.cos(center_lat) * np.cos(lat) * np.cos(
        lon - center_lon
    )


def gnomonic_forward(lat, lon, center_lat, center_lon) -> GnomonicResult:
    """Project spherical coordinates onto the tangent plane at the center.

    Returns both the tangent coordinates ``(x_t, y_t)`` and the sphere vector
    ``(x_bar, y_bar, cos_c)``. Tangent coordinates are marked invalid where
    ``cos_c <= COS_C_MIN`` (on or behind the tangent horizon); the sphere
    vector is always defined and has unit norm.
    """
    lat = np.asarray(lat, dtype=np.float64)
    lon = np.asarray(lon, dtype=np.float64)
    dlon = lon - center_lon
    cos_lat = np.cos(lat)
    sin_lat = np.sin(lat)
    cos_clat = np.cos(center_lat)
    sin_clat = np.sin(center_lat)
    cos_dlon = np.cos(dlon)

    x_bar = cos_lat * np.sin(dlon)
    y_bar = cos_clat * sin_lat - sin_clat * cos_lat * cos_dlon
    cos_c = sin_clat * sin_lat + cos_clat * cos_lat * cos_dlon

    tangent_valid = cos_c > COS_C_MIN
    safe = np.where(tangent_valid, cos_c, 1.0)
    x_t = np.where(tangent_valid, x_bar / safe, np.nan)
    y_t = np.where(tangent_valid, y_bar / safe, np.nan)
    sphere = np.stack([x_bar, y_bar, cos_c], axis=-1)
    return GnomonicResult(x_t, y_t, sphere, tangent_valid)


def gnomonic_inverse(x_t, y_t, center_lat, center_lon):
    """Spherical coordinates whose gnomonic projection equals ``(x_t, y_t)``.

    Uses ``sin(c)/rho = cos(c) = 1/sqrt(1 + rho^2)`` to stay finite at the
    tangent point, and an ``atan2`` for the longitude so that offsets beyond
    90 degrees resolve to the correct quadrant. Longitudes are wrapped into
    ``[-pi, pi)``.
    """
    x_t = np.asarray(x_t, dtype=np.float64)
    y_t = np.asarray(y_t, dtype=np.float64)
    rho2 = x_t * x_t + y_t * y_t
    cos_c = 1.0 / np.sqrt(1.0 + rho2)
    sin_clat = np.sin(center_lat)
    cos_clat = np.cos(center_lat)
    lat = np.arcsin(np.clip(cos_c * (sin_clat + y_t * cos_clat), -1.0, 1.0))
    lon = center_lon + np.arctan2(x_t, cos_clat - y_t * sin_clat)
    return lat, normalize_lon(lon)


def tangent_frame(center_lat: float, center_lon: float) -> np.ndarray:
    """Rotation matrix whose columns are the tangent-frame axes in world.

    Column 0 points along increasing longitude, column 1 along increasing
    latitude, column 2 at the tangent center. For a camera with zero roll
    whose optical axis looks at ``(center_lat, center_lon)`` this is the
    camera-to-world rotation; ``R.T @ v`` expresses a world vector in the
    camera frame and equals the sphere vector from :func:`gnomonic_forward`.
    """
    sin_lat, cos_lat = np.sin(center_lat), np.cos(center_lat)
    sin_lon, cos_lon = np.sin(center_lon), np.cos(center_lon)
    e_lon = np.array([cos_lon, 0.0, -sin_lon])
    e_lat = np.array([-sin_lat * sin_lon, cos_lat, -sin_lat * cos_lon])
    e_ctr = np.array([cos_lat * sin_lon, sin_lat, cos_lat * cos_lon])
    return np.stack([e_lon, e_lat, e_ctr], axis=-1)


def rot_x(angle: float) -> np.ndarray:
    """Rotation about the +x axis."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    """Rotation about the +y axis."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    """Rotation about the +z axis."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
