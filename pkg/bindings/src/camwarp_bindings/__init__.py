"""Array-level bindings over the camwarp conversion pipelines.

These functions let data pipelines run the warps on in-memory numpy arrays
without touching the filesystem or shelling out. Configs cross the boundary
as plain dicts mirroring the JSON file schemas (angles in degrees), and the
same core functions run underneath, so results are bit-identical to the CLI
for identical configs and seeds.

Array contract: images are contiguous uint8 of shape (H, W, 3); depth maps
are contiguous float32 of shape (H, W) with invalid pixels <= 0 (the PFM
convention) or an explicit boolean mask. Shapes and dtypes are checked here,
before any core code runs.
"""

from __future__ import annotations

import math

import numpy as np

from camwarp import DepthMap, LookupTable
from camwarp.cameras import camera_from_dict, camera_to_dict
from camwarp.depth import unproject_depth
from camwarp.io import augment_from_dict, patch_spec_from_dict, read_lut
from camwarp.metrics import evaluate
from camwarp.pipeline import (
    convert_to_erp,
    convert_with_ratios,
    invert_from_erp,
    needs_lut,
    obtain_lut,
    resolve_augment,
)

__all__ = [
    "bind_convert",
    "bind_invert",
    "bind_unproject",
    "bind_evaluate",
    "validate_camera_config",
]

__version__ = "0.1.0"


def _require_image(array, name: str) -> np.ndarray:
    if not isinstance(array, np.ndarray):
        raise TypeError(f"{name} must be a numpy array, got {type(array).__name__}")
    if array.dtype != np.uint8:
        raise TypeError(f"{name} must be uint8, got {array.dtype}")
    if array.ndim != 3 or array.shape[2] != 3:
        raise ValueError(f"{name} must have shape (H, W, 3), got {array.shape}")
    return np.ascontiguousarray(array)


def _require_depth(array, name: str) -> np.ndarray:
    if not isinstance(array, np.ndarray):
        raise TypeError(f"{name} must be a numpy array, got {type(array).__name__}")
    if array.dtype != np.float32:
        raise TypeError(f"{name} must be float32 (the depth wire format), got {array.dtype}")
    if array.ndim != 2:
        raise ValueError(f"{name} must have shape (H, W), got {array.shape}")
    return np.ascontiguousarray(array)


def _require_mask(array, shape, name: str) -> np.ndarray:
    if not isinstance(array, np.ndarray):
        raise TypeError(f"{name} must be a numpy array, got {type(array).__name__}")
    if array.dtype != np.bool_:
        raise TypeError(f"{name} must be bool, got {array.dtype}")
    if array.shape != shape:
        raise ValueError(f"{name} shape {array.shape} does not match depth {shape}")
    return array


def _depth_map(values, valid, name: str) -> DepthMap:
    values = _require_depth(values, name)
    if valid is None:
        return DepthMap.from_values(values)
    return DepthMap(values.astype(np.float64), _require_mask(valid, values.shape, f"{name}_valid"))


def _resolve_lut(camera, lut, width=None, height=None):
    if not needs_lut(camera):
        return None
    if isinstance(lut, LookupTable):
        return lut
    if isinstance(lut, str):
        return read_lut(lut)
    if lut is None:
        return obtain_lut(camera, width=width, height=height)
    raise TypeError(f"lut must be a LookupTable, a cache path, or None, got {type(lut).__name__}")


def validate_camera_config(config: dict) -> dict:
    """Check a camera config record and return its normalized form.

    Raises the core's diagnostics for malformed records; the result is the
    canonical field set actually used by the pipelines.
    """
    if not isinstance(config, dict):
        raise TypeError(f"camera config must be a dict, got {type(config).__name__}")
    return camera_to_dict(camera_from_dict(config))


def bind_convert(
    camera: dict,
    spec: dict,
    image: np.ndarray | None = None,
    depth: np.ndarray | None = None,
    depth_valid: np.ndarray | None = None,
    aug: dict | None = None,
    pitch_jitter_deg: float = 0.0,
    rot_jitter_deg: float = 0.0,
    fov_align: bool = False,
    seed: int | None = None,
    ratios=(1.0,),
    depth_interp: str = "nearest",
):
    """Warp in-memory image/depth content into an ERP patch.

    Mirrors the ``camwarp convert`` command: ``aug`` is the fixed base
    augmentation (degrees schema) and the jitter maxima sample additional
    noise from ``seed``. Returns one record per ratio with keys ``suffix``,
    ``image``, ``depth``, ``depth_valid``, ``mask``, ``depth_scale``, plus
    the exact sidecar under ``sidecar``.
    """
    cam = camera_from_dict(camera)
    patch = patch_spec_from_dict(spec)
    image = _require_image(image, "image") if image is not None else None
    depth_map = _depth_map(depth, depth_valid, "depth") if depth is not None else None

    base = augment_from_dict(aug) if aug else None
    resolved = resolve_augment(
        scale=base.scale if base else 1.0,
        rotation=base.rotation if base else 0.0,
        translation=base.translation if base else (0.0, 0.0),
        base_pitch_jitter=base.pitch_jitter if base else 0.0,
        pitch_jitter_max=math.radians(pitch_jitter_deg),
        rot_jitter_max=math.radians(rot_jitter_deg),
        seed=seed,
    )
    result = convert_to_erp(
        cam,
        patch,
        image=image,
        depth=depth_map,
        aug=resolved,
        fov_align=fov_align,
        interp_depth=depth_interp,
        seed=seed,
    )
    sidecar = dict(result.sidecar)
    sidecar["ratios"] = list(ratios)

    outputs = []
    for suffix, _, img, dep, scale in convert_with_ratios(result, tuple(ratios)):
        if suffix:
            sidecar.setdefault("depth_scales", {})[suffix] = scale
        outputs.append(
            {
                "suffix": suffix,
                "image": img,
                "depth": dep.values.astype(np.float32) if dep is not None else None,
                "depth_valid": dep.valid.copy() if dep is not None else None,
                "mask": result.mask if suffix == "" else None,
                "depth_scale": scale,
                "sidecar": sidecar,
            }
        )
    return outputs


def bind_invert(
    camera: dict,
    spec: dict,
    erp_image: np.ndarray | None = None,
    erp_depth: np.ndarray | None = None,
    erp_depth_valid: np.ndarray | None = None,
    lut: LookupTable | str | None = None,
):
    """Warp ERP-patch arrays back into the camera's image space."""
    cam = camera_from_dict(camera)
    patch = patch_spec_from_dict(spec)
    erp_image = _require_image(erp_image, "erp_image") if erp_image is not None else None
    depth_map = (
        _depth_map(erp_depth, erp_depth_valid, "erp_depth") if erp_depth is not None else None
    )
    table = _resolve_lut(cam, lut)
    result = invert_from_erp(cam, patch, erp_image=erp_image, erp_depth=depth_map, lut=table)
    return {
        "image": result.image,
        "depth": result.depth.values.astype(np.float32) if result.depth is not None else None,
        "depth_valid": result.depth.valid.copy() if result.depth is not None else None,
        "mask": result.mask,
        "sidecar": result.sidecar,
    }


def bind_unproject(
    camera: dict,
    depth: np.ndarray,
    depth_valid: np.ndarray | None = None,
    spec: dict | None = None,
    image: np.ndarray | None = None,
    lut: LookupTable | str | None = None,
):
    """Lift a depth array to 3D points; returns ``{"points", "colors"}``."""
    cam = camera_from_dict(camera)
    depth_map = _depth_map(depth, depth_valid, "depth")
    patch = patch_spec_from_dict(spec) if spec is not None else None
    if patch is None and hasattr(cam, "erp_height"):
        from camwarp import ErpPatchSpec

        patch = ErpPatchSpec.full(cam.erp_height)
    image = _require_image(image, "image") if image is not None else None
    table = _resolve_lut(cam, lut, width=depth_map.width, height=depth_map.height)
    cloud = unproject_depth(depth_map, cam, lut=table, spec=patch, image=image)
    return {"points": cloud.points, "colors": cloud.colors}


def bind_evaluate(
    pred: np.ndarray,
    gt: np.ndarray,
    min_depth: float,
    max_depth: float,
    pred_valid: np.ndarray | None = None,
    gt_valid: np.ndarray | None = None,
) -> dict:
    """Metric-depth evaluation on arrays; same record as the ``eval`` CLI."""
    pred_map = _depth_map(pred, pred_valid, "pred")
    gt_map = _depth_map(gt, gt_valid, "gt")
    return evaluate(pred_map, gt_map, min_depth, max_depth).as_dict()
