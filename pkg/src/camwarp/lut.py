"""Lookup-table inversion of distorted camera projections.

A :class:`LookupTable` stores one unit ray per pixel, approximating the
inverse of a camera's forward projection. Construction is a two-pass grid
search: a coarse angular grid scattered into pixel bins, followed by a local
refinement around each pixel's best candidate. The result satisfies
``|project(ray) - pixel_center| < 0.5 px`` wherever a solution exists;
pixels the search cannot reach are flagged invalid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .cameras import CameraModel, ErpCamera
from .errors import DimensionMismatchError, LutUnsupportedError

_REFINE_STEPS = 7
_REFINE_POINTS = 5  # per axis, so 25 candidates per step


@dataclass(frozen=True)
class LookupTable:
    """Per-pixel unit rays (camera frame) with a validity mask.

    ``rays`` has shape ``(height, width, 3)``; entries are unit-norm where
    ``valid`` is True and zero elsewhere. Immutable after construction and
    safe to share across threads.
    """

    width: int
    height: int
    rays: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        if self.rays.shape != (self.height, self.width, 3):
            raise DimensionMismatchError(
                f"ray table shape {self.rays.shape} != ({self.height}, {self.width}, 3)"
            )
        if self.valid.shape != (self.height, self.width):
            raise DimensionMismatchError(
                f"validity shape {self.valid.shape} != ({self.height}, {self.width})"
            )

    def sample(self, uv: np.ndarray):
        """Bilinearly interpolate rays at continuous pixel coordinates.

        Interpolated vectors are renormalized to unit length. A sample is
        valid only when every neighbor that carries weight is valid.
        """
        uv = np.asarray(uv, dtype=np.float64)
        xi = np.clip(uv[..., 0] - 0.5, 0.0, self.width - 1.0)
        yi = np.clip(uv[..., 1] - 0.5, 0.0, self.height - 1.0)
        x0 = np.clip(np.floor(xi).astype(np.int64), 0, self.width - 2) if self.width > 1 else np.zeros_like(xi, dtype=np.int64)
        y0 = np.clip(np.floor(yi).astype(np.int64), 0, self.height - 2) if self.height > 1 else np.zeros_like(yi, dtype=np.int64)
        x1 = np.minimum(x0 + 1, self.width - 1)
        y1 = np.minimum(y0 + 1, self.height - 1)
        tx = xi - x0
        ty = yi - y0

        w00 = (1 - tx) * (1 - ty)
        w01 = tx * (1 - ty)
        w10 = (1 - tx) * ty
        w11 = tx * ty

        def gather(ys, xs):
            return self.rays[ys, xs], self.valid[ys, xs]

        r00, v00 = gather(y0, x0)
        r01, v01 = gather(y0, x1)
        r10, v10 = gather(y1, x0)
        r11, v11 = gather(y1, x1)

        valid_weight = w00 * v00 + w01 * v01 + w10 * v10 + w11 * v11
        rays = (
            w00[..., None] * r00
            + w01[..., None] * r01
            + w10[..., None] * r10
            + w11[..., None] * r11
        )
        valid = valid_weight > 1.0 - 1e-9
        norm = np.linalg.norm(rays, axis=-1, keepdims=True)
        ok = norm[..., 0] > 1e-12
        valid &= ok
        rays = np.where(ok[..., None], rays / np.where(ok[..., None], norm, 1.0), 0.0)
        return rays, valid


def _candidate_rays(theta, psi):
    sin_t = np.sin(theta)
    return np.stack([sin_t * np.cos(psi), sin_t * np.sin(psi), np.cos(theta)], axis=-1)


def _search_max_theta(model: CameraModel) -> float:
    return float(model.max_theta) if hasattr(model, "max_theta") else _pinhole_max_theta(model)


def _pinhole_max_theta(model) -> float:
    # Cover the most distant image corner with some slack, capped below 90deg.
    intr = model.intrinsics
    span_x = max(abs(0.0 - intr.cx), abs(model.width - intr.cx))
    span_y = max(abs(0.0 - intr.cy), abs(model.height - intr.cy))
    r_corner = np.hypot(span_x / intr.fx, span_y / intr.fy)
    return min(float(np.arctan(r_corner)) * 1.05 + 0.01, np.pi / 2 - 1e-3)


def build_lookup_table(
    model: CameraModel,
    width: int,
    height: int,
    search_resolution: int = 2048,
    max_theta: float | None = None,
) -> LookupTable:
    """Grid-search a per-pixel inverse of ``model``'s projection.

    Pass 1 projects a ``search_resolution**2`` grid of candidate rays over
    the model's angular domain and keeps, for each output pixel, the
    candidate landing nearest its center. Pass 2 refines each pixel's
    candidate with a shrinking local angular search. Pixels that never
    receive a candidate borrow the nearest seeded neighbor's angles before
    refinement, and stay invalid if refinement cannot reach 0.5 px.

    Refused for the equirectangular model, whose inverse is closed-form.
    """
    if isinstance(model, ErpCamera):
        raise LutUnsupportedError(
            "equirectangular unprojection is closed-form; lookup table refused"
        )
    if width < 1 or height < 1:
        raise DimensionMismatchError(f"LUT size must be positive, got {width}x{height}")
    theta_max = float(max_theta) if max_theta is not None else _search_max_theta(model)

    n = int(search_resolution)
    thetas = np.linspace(0.0, theta_max, n)
    psis = np.linspace(-np.pi, np.pi, n, endpoint=False)
    n_pix = width * height

    best_dist = np.full(n_pix, np.inf, dtype=np.float64)
    best_theta = np.zeros(n_pix, dtype=np.float64)
    best_psi = np.zeros(n_pix, dtype=np.float64)

    # Chunk over theta rows to bound memory at ~n candidates per chunk row.
    chunk = max(1, (1 << 22) // n)
    for start in range(0, n, chunk):
        th = thetas[start : start + chunk]
        theta_grid, psi_grid = np.meshgrid(th, psis, indexing="ij")
        rays = _candidate_rays(theta_grid.ravel(), psi_grid.ravel())
        uv, ok = model.project(rays)
        u, v = uv[..., 0], uv[..., 1]
        ok &= (u >= 0) & (u < width) & (v >= 0) & (v < height)
        if not ok.any():
            continue
        u, v = u[ok], v[ok]
        ix = np.floor(u).astype(np.int64)
        iy = np.floor(v).astype(np.int64)
        pix = iy * width + ix
        dist = (u - (ix + 0.5)) ** 2 + (v - (iy + 0.5)) ** 2

        order = np.lexsort((dist, pix))
        pix, dist = pix[order], dist[order]
        first = np.ones(pix.shape, dtype=bool)
        first[1:] = pix[1:] != pix[:-1]
        pix_f, dist_f = pix[first], dist[first]
        sel = np.flatnonzero(ok)[order][first]

        better = dist_f < best_dist[pix_f]
        tgt = pix_f[better]
        src = sel[better]
        best_dist[tgt] = dist_f[better]
        best_theta[tgt] = theta_grid.ravel()[src]
        best_psi[tgt] = psi_grid.ravel()[src]

    seeded = np.isfinite(best_dist).reshape(height, width)
    if not seeded.any():
        rays = np.zeros((height, width, 3), dtype=np.float64)
        return LookupTable(width, height, rays, np.zeros((height, width), dtype=bool))
    if not seeded.all():
        # Borrow angles from the nearest seeded pixel as a refinement seed.
        idx = ndimage.distance_transform_edt(
            ~seeded, return_indices=True, return_distances=False
        )
        flat = (idx[0] * width + idx[1]).ravel()
        best_theta = best_theta[flat]
        best_psi = best_psi[flat]

    centers_x = (np.arange(width) + 0.5)[None, :].repeat(height, axis=0).ravel()
    centers_y = (np.arange(height) + 0.5)[:, None].repeat(width, axis=1).ravel()
    theta = best_theta.copy()
    psi = best_psi.copy()

    # Local refinement: a 5x5 angular neighborhood that halves every step.
    span_theta = theta_max / max(n - 1, 1)
    span_psi = 2 * np.pi / n
    offsets = np.linspace(-1.0, 1.0, _REFINE_POINTS)
    d_theta, d_psi = np.meshgrid(offsets, offsets, indexing="ij")
    d_theta = d_theta.ravel()[None, :]
    d_psi = d_psi.ravel()[None, :]

    final_err = np.full(n_pix, np.inf)
    for _ in range(_REFINE_STEPS):
        cand_theta = np.clip(theta[:, None] + span_theta * d_theta, 0.0, theta_max)
        cand_psi = psi[:, None] + span_psi * d_psi
        rays = _candidate_rays(cand_theta, cand_psi)
        uv, ok = model.project(rays.reshape(-1, 3))
        uv = uv.reshape(n_pix, -1, 2)
        ok = ok.reshape(n_pix, -1)
        err = np.hypot(uv[..., 0] - centers_x[:, None], uv[..., 1] - centers_y[:, None])
        err = np.where(ok, err, np.inf)
        pick = np.argmin(err, axis=1)
        rows = np.arange(n_pix)
        theta = cand_theta[rows, pick]
        psi = cand_psi[rows, pick]
        final_err = err[rows, pick]
        span_theta *= 0.5
        span_psi *= 0.5

    valid = (final_err < 0.5).reshape(height, width)
    rays = _candidate_rays(theta, psi).reshape(height, width, 3)
    rays[~valid] = 0.0
    return LookupTable(width, height, rays, valid)
