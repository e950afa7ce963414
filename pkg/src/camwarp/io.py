"""File formats: PNG images, PFM depth, PLY point clouds, LUT caches, JSON.

Depth travels as grayscale PFM (little-endian float32) holding Euclidean
distance in meters with invalid pixels stored as zero. Angles inside JSON
files are degrees; they become radians at this boundary and stay radians
everywhere else.
"""

from __future__ import annotations

import json
import math
import struct

import numpy as np
from PIL import Image

from .depth import DepthMap, PointCloud
from .errors import ConfigError
from .erp import AugmentParams, ErpPatchSpec
from .lut import LookupTable

LUT_MAGIC = b"CWLUT001"


# ---------------------------------------------------------------------------
# images


def load_image(path) -> np.ndarray:
    """Load an image as uint8 RGB of shape (H, W, 3)."""
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"))


def save_image(path, image: np.ndarray):
    arr = np.asarray(image)
    if arr.dtype != np.uint8:
        raise ConfigError(f"images are written as 8-bit, got dtype {arr.dtype}")
    Image.fromarray(arr).save(path, format="PNG")


def save_mask(path, mask: np.ndarray):
    """Write a boolean mask as an 8-bit PNG (255 = valid)."""
    Image.fromarray(np.where(mask, 255, 0).astype(np.uint8)).save(path, format="PNG")


def load_mask(path) -> np.ndarray:
    with Image.open(path) as img:
        return np.asarray(img.convert("L")) > 127


# ---------------------------------------------------------------------------
# PFM depth


def write_pfm(path, depth: DepthMap):
    """Write depth as grayscale PFM; invalid pixels become zero."""
    values = np.where(depth.valid, depth.values, 0.0).astype(np.float32)
    with open(path, "wb") as fh:
        fh.write(b"Pf\n")
        fh.write(f"{values.shape[1]} {values.shape[0]}\n".encode("ascii"))
        fh.write(b"-1.0\n")  # negative scale marks little-endian
        fh.write(np.flipud(values).astype("<f4").tobytes())


def read_pfm(path) -> DepthMap:
    """Read a grayscale PFM; positive finite pixels are valid."""
    with open(path, "rb") as fh:
        header = fh.readline().strip()
        if header not in (b"Pf", b"PF"):
            raise ConfigError(f"not a PFM file: header {header!r}")
        if header == b"PF":
            raise ConfigError("color PFM is not a depth map")
        dims = fh.readline().split()
        if len(dims) != 2:
            raise ConfigError("malformed PFM dimensions line")
        width, height = int(dims[0]), int(dims[1])
        scale = float(fh.readline().strip())
        dtype = "<f4" if scale < 0 else ">f4"
        data = np.frombuffer(fh.read(width * height * 4), dtype=dtype)
        if data.size != width * height:
            raise ConfigError("truncated PFM payload")
        values = np.flipud(data.reshape(height, width)).astype(np.float64)
        if abs(scale) not in (0.0, 1.0):
            values = values * abs(scale)
    return DepthMap.from_values(values)


# ---------------------------------------------------------------------------
# PLY point clouds


def write_ply(path, cloud: PointCloud, binary: bool = True):
    """Write a point cloud as PLY (binary little-endian by default)."""
    n = len(cloud)
    has_color = cloud.colors is not None
    header = ["ply"]
    header.append("format binary_little_endian 1.0" if binary else "format ascii 1.0")
    header.append(f"element vertex {n}")
    header += ["property float x", "property float y", "property float z"]
    if has_color:
        header += ["property uchar red", "property uchar green", "property uchar blue"]
    header.append("end_header")

    with open(path, "wb") as fh:
        fh.write(("\n".join(header) + "\n").encode("ascii"))
        if binary:
            pts = cloud.points.astype("<f4")
            if has_color:
                row = np.zeros(n, dtype=[("xyz", "<f4", 3), ("rgb", "u1", 3)])
                row["xyz"] = pts
                row["rgb"] = cloud.colors
                fh.write(row.tobytes())
            else:
                fh.write(pts.tobytes())
        else:
            for i in range(n):
                x, y, z = cloud.points[i]
                line = f"{x:.7g} {y:.7g} {z:.7g}"
                if has_color:
                    r, g, b = cloud.colors[i]
                    line += f" {r} {g} {b}"
                fh.write((line + "\n").encode("ascii"))


def read_ply(path) -> PointCloud:
    """Read PLY files produced by :func:`write_ply`."""
    with open(path, "rb") as fh:
        line = fh.readline().strip()
        if line != b"ply":
            raise ConfigError("not a PLY file")
        binary = None
        n = None
        props = []
        while True:
            line = fh.readline()
            if not line:
                raise ConfigError("unterminated PLY header")
            line = line.strip()
            if line.startswith(b"format"):
                binary = b"binary_little_endian" in line
            elif line.startswith(b"element vertex"):
                n = int(line.split()[-1])
            elif line.startswith(b"property"):
                props.append(line.split()[-1].decode("ascii"))
            elif line == b"end_header":
                break
        if n is None or binary is None:
            raise ConfigError("malformed PLY header")
        has_color = "red" in props
        if binary:
            dtype = [("xyz", "<f4", 3)] + ([("rgb", "u1", 3)] if has_color else [])
            rows = np.frombuffer(fh.read(), dtype=dtype, count=n)
            points = rows["xyz"].astype(np.float64)
            colors = rows["rgb"].copy() if has_color else None
        else:
            table = np.loadtxt(fh, max_rows=n, ndmin=2)
            points = table[:, :3]
            colors = table[:, 3:6].astype(np.uint8) if has_color else None
    return PointCloud(points, colors)


# ---------------------------------------------------------------------------
# LUT cache


def write_lut(path, lut: LookupTable):
    """Binary cache: magic, size, float32 ray triples, validity bitmap."""
    with open(path, "wb") as fh:
        fh.write(LUT_MAGIC)
        fh.write(struct.pack("<II", lut.width, lut.height))
        fh.write(lut.rays.astype("<f4").tobytes())
        fh.write(np.packbits(lut.valid.ravel(), bitorder="little").tobytes())


def read_lut(path) -> LookupTable:
    """Read a LUT cache; rays are renormalized to restore unit length."""
    with open(path, "rb") as fh:
        magic = fh.read(len(LUT_MAGIC))
        if magic != LUT_MAGIC:
            raise ConfigError(f"not a LUT cache file: magic {magic!r}")
        width, height = struct.unpack("<II", fh.read(8))
        n = width * height
        rays = np.frombuffer(fh.read(n * 12), dtype="<f4")
        if rays.size != n * 3:
            raise ConfigError("truncated LUT ray payload")
        rays = rays.reshape(height, width, 3).astype(np.float64)
        bits = np.frombuffer(fh.read((n + 7) // 8), dtype=np.uint8)
        valid = np.unpackbits(bits, count=n, bitorder="little").astype(bool)
        valid = valid.reshape(height, width)
    norm = np.linalg.norm(rays, axis=-1, keepdims=True)
    ok = norm[..., 0] > 1e-12
    valid &= ok
    rays = np.where(ok[..., None], rays / np.where(ok[..., None], norm, 1.0), 0.0)
    return LookupTable(width, height, rays, valid)


# ---------------------------------------------------------------------------
# JSON configs (degrees at this boundary)


def load_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc


def save_json(path, obj: dict):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def patch_spec_from_dict(cfg: dict) -> ErpPatchSpec:
    """Patch spec from JSON fields (center angles in degrees)."""
    try:
        return ErpPatchSpec(
            erp_height=int(cfg["erp_height"]),
            patch_h=int(cfg["patch_h"]),
            patch_w=int(cfg["patch_w"]),
            center_lat=math.radians(float(cfg.get("center_lat_deg", 0.0))),
            center_lon=math.radians(float(cfg.get("center_lon_deg", 0.0))),
        )
    except KeyError as exc:
        raise ConfigError(f"patch spec missing required field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"patch spec has malformed value: {exc}") from exc


def patch_spec_to_dict(spec: ErpPatchSpec) -> dict:
    return {
        "erp_height": spec.erp_height,
        "patch_h": spec.patch_h,
        "patch_w": spec.patch_w,
        "center_lat_deg": math.degrees(spec.center_lat),
        "center_lon_deg": math.degrees(spec.center_lon),
    }


def augment_from_dict(cfg: dict) -> AugmentParams:
    """Augmentation from JSON fields (angles in degrees)."""
    try:
        translation = cfg.get("translation", (0.0, 0.0))
        return AugmentParams(
            scale=float(cfg.get("scale", 1.0)),
            rotation=math.radians(float(cfg.get("rotation_deg", 0.0))),
            translation=(float(translation[0]), float(translation[1])),
            pitch_jitter=math.radians(float(cfg.get("pitch_jitter_deg", 0.0))),
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"augmentation config has malformed value: {exc}") from exc


def augment_to_dict(aug: AugmentParams) -> dict:
    return {
        "scale": aug.scale,
        "rotation_deg": math.degrees(aug.rotation),
        "translation": list(aug.translation),
        "pitch_jitter_deg": math.degrees(aug.pitch_jitter),
    }
