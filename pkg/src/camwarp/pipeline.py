"""Shared conversion pipelines behind the CLI and the scripting bindings.

Both entry points funnel into the functions here, so identical configs and
seeds produce identical arrays no matter which surface invoked them. Every
run yields a sidecar record holding the exact resolved parameters (angles in
radians, unrounded); replaying a sidecar reproduces the outputs bit-exactly.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass

import numpy as np

from .cameras import CameraModel, KannalaBrandtCamera, MeiCamera, camera_to_dict
from .depth import DepthMap
from .erp import (
    AugmentParams,
    ErpPatchSpec,
    build_erp_to_image_grid,
    build_image_to_erp_grid,
    fov_align_scale,
)
from .errors import ConfigError
from .io import read_lut, write_lut
from .lut import LookupTable, build_lookup_table
from .resample import multi_resolution_set, sample_depth, sample_image


@dataclass(frozen=True)
class ConvertResult:
    """Outputs of one image-to-ERP conversion."""

    image: np.ndarray | None
    depth: DepthMap | None
    mask: np.ndarray
    sidecar: dict


@dataclass(frozen=True)
class InvertResult:
    """Outputs of one ERP-to-image conversion."""

    image: np.ndarray | None
    depth: DepthMap | None
    mask: np.ndarray
    sidecar: dict


def resolve_augment(
    scale: float = 1.0,
    rotation: float = 0.0,
    translation: tuple[float, float] = (0.0, 0.0),
    base_pitch_jitter: float = 0.0,
    pitch_jitter_max: float = 0.0,
    rot_jitter_max: float = 0.0,
    seed: int | None = None,
) -> AugmentParams:
    """Turn jitter ranges into concrete augmentation parameters.

    Jitters are drawn uniformly from ``[-max, +max]`` with a generator seeded
    by ``seed``; pitch is drawn first, then rotation, so the same seed always
    yields the same pair. Draws add onto the fixed base values.
    """
    pitch = base_pitch_jitter
    rot = rotation
    if pitch_jitter_max != 0.0 or rot_jitter_max != 0.0:
        rng = np.random.default_rng(seed)
        if pitch_jitter_max != 0.0:
            pitch = base_pitch_jitter + float(rng.uniform(-pitch_jitter_max, pitch_jitter_max))
        if rot_jitter_max != 0.0:
            rot = rotation + float(rng.uniform(-rot_jitter_max, rot_jitter_max))
    return AugmentParams(scale=scale, rotation=rot, translation=translation, pitch_jitter=pitch)


def augment_sidecar(aug: AugmentParams) -> dict:
    """Exact (radian) record of augmentation parameters for replay."""
    return {
        "scale": aug.scale,
        "rotation_rad": aug.rotation,
        "translation": list(aug.translation),
        "pitch_jitter_rad": aug.pitch_jitter,
    }


def augment_from_sidecar(record: dict) -> AugmentParams:
    return AugmentParams(
        scale=float(record["scale"]),
        rotation=float(record["rotation_rad"]),
        translation=tuple(float(t) for t in record["translation"]),
        pitch_jitter=float(record["pitch_jitter_rad"]),
    )


def spec_sidecar(spec: ErpPatchSpec) -> dict:
    return {
        "erp_height": spec.erp_height,
        "patch_h": spec.patch_h,
        "patch_w": spec.patch_w,
        "center_lat_rad": spec.center_lat,
        "center_lon_rad": spec.center_lon,
    }


def spec_from_sidecar(record: dict) -> ErpPatchSpec:
    return ErpPatchSpec(
        erp_height=int(record["erp_height"]),
        patch_h=int(record["patch_h"]),
        patch_w=int(record["patch_w"]),
        center_lat=float(record["center_lat_rad"]),
        center_lon=float(record["center_lon_rad"]),
    )


def convert_to_erp(
    camera: CameraModel,
    spec: ErpPatchSpec,
    image: np.ndarray | None = None,
    depth: DepthMap | None = None,
    aug: AugmentParams | None = None,
    fov_align: bool = False,
    interp_image: str = "bilinear",
    interp_depth: str = "nearest",
    seed: int | None = None,
) -> ConvertResult:
    """Warp an image and/or depth map into an ERP patch.

    With ``fov_align`` the augmentation scale is replaced by the factor that
    fills the patch height with the camera's vertical FoV. The returned
    sidecar records everything needed to reproduce the call.
    """
    if image is None and depth is None:
        raise ConfigError("conversion needs an image or a depth map")
    aug = aug or AugmentParams()
    if fov_align:
        aug = dataclasses.replace(aug, scale=fov_align_scale(camera.vertical_fov, spec))

    grid = build_image_to_erp_grid(spec, camera, aug)
    out_image = sample_image(grid, image, interp_image)[0] if image is not None else None
    out_depth = sample_depth(grid, depth, interp_depth) if depth is not None else None
    sidecar = {
        "command": "convert",
        "camera": camera_to_dict(camera),
        "patch_spec": spec_sidecar(spec),
        "augment": augment_sidecar(aug),
        "fov_align": bool(fov_align),
        "interp_image": interp_image,
        "interp_depth": interp_depth,
        "seed": seed,
    }
    return ConvertResult(out_image, out_depth, grid.valid.copy(), sidecar)


def invert_from_erp(
    camera: CameraModel,
    spec: ErpPatchSpec,
    erp_image: np.ndarray | None = None,
    erp_depth: DepthMap | None = None,
    lut: LookupTable | None = None,
    interp_image: str = "bilinear",
    interp_depth: str = "nearest",
) -> InvertResult:
    """Warp ERP-patch content back into the camera's image space."""
    if erp_image is None and erp_depth is None:
        raise ConfigError("inversion needs an image or a depth map")
    grid = build_erp_to_image_grid(spec, camera, lut)
    out_image = sample_image(grid, erp_image, interp_image)[0] if erp_image is not None else None
    out_depth = sample_depth(grid, erp_depth, interp_depth) if erp_depth is not None else None
    sidecar = {
        "command": "invert",
        "camera": camera_to_dict(camera),
        "patch_spec": spec_sidecar(spec),
        "interp_image": interp_image,
        "interp_depth": interp_depth,
    }
    return InvertResult(out_image, out_depth, grid.valid.copy(), sidecar)


def convert_with_ratios(
    result: ConvertResult, ratios
) -> list[tuple[str, float, np.ndarray | None, DepthMap | None, float]]:
    """Multi-resolution copies of a conversion, tagged with name suffixes."""
    sets = multi_resolution_set(result.image, result.depth, ratios)
    out = []
    for ratio, (img, dep, scale) in zip(ratios, sets):
        suffix = "" if ratio == 1.0 else f"_r{ratio:.2f}"
        out.append((suffix, ratio, img, dep, scale))
    return out


def needs_lut(camera: CameraModel) -> bool:
    return isinstance(camera, (KannalaBrandtCamera, MeiCamera))


def lut_cache_key(camera: CameraModel, width: int, height: int) -> str:
    """Stable cache filename for a camera's LUT at a given size."""
    payload = json.dumps(
        {"camera": camera_to_dict(camera), "width": width, "height": height},
        sort_keys=True,
    )
    return "lut_" + hashlib.sha256(payload.encode("ascii")).hexdigest()[:16] + ".bin"


def obtain_lut(
    camera: CameraModel,
    width: int | None = None,
    height: int | None = None,
    cache_dir: str | None = None,
    search_resolution: int = 2048,
) -> LookupTable | None:
    """Fetch or build the LUT for a distorted camera; None for closed forms.

    With a cache directory the table is loaded when present and written
    after a fresh build.
    """
    if not needs_lut(camera):
        return None
    width = width if width is not None else camera.width
    height = height if height is not None else camera.height
    path = None
    if cache_dir is not None:
        os.makedirs(cache_dir, exist_ok=True)
        path = os.path.join(cache_dir, lut_cache_key(camera, width, height))
        if os.path.exists(path):
            return read_lut(path)
    lut = build_lookup_table(camera, width, height, search_resolution=search_resolution)
    if path is not None:
        write_lut(path, lut)
    return lut


def pitch_to_center_lat(pitch: float) -> float:
    """Patch center latitude for a camera pitch: ``center_lat = -pitch``."""
    return -pitch
