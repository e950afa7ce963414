"""Command-line front end.

Subcommands: convert, invert, lut-gen, unproject, eval, augment, render.
Exit codes: 0 ok, 2 configuration, 3 I/O, 4 numeric domain. All randomness
(pitch and rotation jitter) flows from the single ``--seed`` flag, and every
warp writes a sidecar JSON whose replay reproduces the outputs byte for
byte.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import io as cio
from .cameras import ErpCamera, camera_from_dict
from .depth import unproject_depth
from .errors import CamwarpError, ConfigError, DomainError
from .geometry import tangent_frame
from .lut import build_lookup_table
from .metrics import evaluate
from .pipeline import (
    augment_from_sidecar,
    convert_to_erp,
    convert_with_ratios,
    invert_from_erp,
    needs_lut,
    obtain_lut,
    pitch_to_center_lat,
    resolve_augment,
    spec_from_sidecar,
)
from .resample import resize_dims, resize_nearest
from .scenes import render, scene_from_dict
from .erp import ErpPatchSpec


def _parse_hw(text: str, flag: str) -> tuple[int, int]:
    try:
        h, w = text.lower().split("x")
        return int(h), int(w)
    except ValueError as exc:
        raise ConfigError(f"{flag} expects HxW, got '{text}'") from exc


def _parse_ratios(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(r) for r in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"--ratios expects comma-separated floats, got '{text}'") from exc


def _load_camera(path):
    return camera_from_dict(cio.load_json(path))


def _load_spec(path) -> ErpPatchSpec:
    cfg = cio.load_json(path)
    if "patch_spec" in cfg:  # a convert sidecar doubles as a spec file
        return spec_from_sidecar(cfg["patch_spec"])
    return cio.patch_spec_from_dict(cfg)


def _out_paths(out_dir: str, stem: str, suffix: str = ""):
    os.makedirs(out_dir, exist_ok=True)
    base = os.path.join(out_dir, stem + suffix)
    return base + ".png", base + "_depth.pfm", base + "_mask.png"


def cmd_convert(args) -> int:
    camera = _load_camera(args.camera)
    image = cio.load_image(args.image) if args.image else None
    depth = cio.read_pfm(args.depth) if args.depth else None

    if args.replay:
        sidecar = cio.load_json(args.replay)
        spec = spec_from_sidecar(sidecar["patch_spec"])
        aug = augment_from_sidecar(sidecar["augment"])
        fov_align = bool(sidecar.get("fov_align", False))
        ratios = tuple(sidecar.get("ratios", (1.0,)))
        interp_depth = sidecar.get("interp_depth", "nearest")
        seed = sidecar.get("seed")
    else:
        if args.erp_height is None or args.patch is None:
            raise ConfigError("convert needs --erp-height and --patch (or --replay)")
        patch_h, patch_w = _parse_hw(args.patch, "--patch")
        spec = ErpPatchSpec(
            erp_height=args.erp_height,
            patch_h=patch_h,
            patch_w=patch_w,
            center_lat=pitch_to_center_lat(math.radians(args.pitch)),
            center_lon=math.radians(args.center_lon),
        )
        base = cio.augment_from_dict(cio.load_json(args.aug)) if args.aug else None
        aug = resolve_augment(
            scale=args.scale if args.scale is not None else (base.scale if base else 1.0),
            rotation=math.radians(args.rotation) if args.rotation is not None else (base.rotation if base else 0.0),
            translation=base.translation if base else (0.0, 0.0),
            base_pitch_jitter=base.pitch_jitter if base else 0.0,
            pitch_jitter_max=math.radians(args.pitch_jitter),
            rot_jitter_max=math.radians(args.rot_jitter),
            seed=args.seed,
        )
        fov_align = args.fov_align
        ratios = _parse_ratios(args.ratios)
        interp_depth = args.depth_interp
        seed = args.seed

    result = convert_to_erp(
        camera,
        spec,
        image=image,
        depth=depth,
        aug=aug,
        fov_align=fov_align,
        interp_depth=interp_depth,
        seed=seed,
    )
    sidecar = dict(result.sidecar)
    sidecar["ratios"] = list(ratios)

    for suffix, ratio, img, dep, scale in convert_with_ratios(result, ratios):
        img_path, depth_path, mask_path = _out_paths(args.out, "erp", suffix)
        if img is not None:
            cio.save_image(img_path, img)
        if dep is not None:
            cio.write_pfm(depth_path, dep)
            cio.save_mask(mask_path, dep.valid)
        else:
            mask = result.mask
            if ratio != 1.0:
                mask = resize_nearest(mask, *resize_dims(ratio, *mask.shape))
            cio.save_mask(mask_path, mask)
        if suffix:
            sidecar.setdefault("depth_scales", {})[suffix] = scale

    cio.save_json(os.path.join(args.out, "sidecar.json"), sidecar)
    return 0


def cmd_invert(args) -> int:
    camera = _load_camera(args.camera)
    spec = _load_spec(args.spec)
    erp_image = cio.load_image(args.erp_image) if args.erp_image else None
    erp_depth = cio.read_pfm(args.erp_depth) if args.erp_depth else None
    lut = None
    if needs_lut(camera):
        lut = cio.read_lut(args.lut) if args.lut else obtain_lut(camera, cache_dir=args.lut_cache)

    result = invert_from_erp(camera, spec, erp_image=erp_image, erp_depth=erp_depth, lut=lut)
    img_path, depth_path, mask_path = _out_paths(args.out, "image")
    if result.image is not None:
        cio.save_image(img_path, result.image)
    if result.depth is not None:
        cio.write_pfm(depth_path, result.depth)
    cio.save_mask(mask_path, result.mask)
    cio.save_json(os.path.join(args.out, "sidecar.json"), result.sidecar)
    return 0


def cmd_lut_gen(args) -> int:
    camera = _load_camera(args.camera)
    if args.size:
        height, width = _parse_hw(args.size, "--size")
    else:
        width, height = camera.width, camera.height
    lut = build_lookup_table(camera, width, height, search_resolution=args.resolution)
    cio.write_lut(args.out, lut)
    print(f"wrote {args.out}: {width}x{height}, {int(lut.valid.sum())} valid pixels")
    return 0


def cmd_unproject(args) -> int:
    camera = _load_camera(args.camera)
    depth = cio.read_pfm(args.depth)
    image = cio.load_image(args.image) if args.image else None
    spec = _load_spec(args.spec) if args.spec else None
    if spec is None and isinstance(camera, ErpCamera):
        spec = ErpPatchSpec.full(camera.erp_height)
    lut = None
    if needs_lut(camera):
        lut = cio.read_lut(args.lut) if args.lut else obtain_lut(
            camera, width=depth.width, height=depth.height, cache_dir=args.lut_cache
        )
    cloud = unproject_depth(depth, camera, lut=lut, spec=spec, image=image)
    cio.write_ply(args.out, cloud, binary=not args.ascii)
    print(f"wrote {args.out}: {len(cloud)} points")
    return 0


def cmd_eval(args) -> int:
    pred = cio.read_pfm(args.pred)
    gt = cio.read_pfm(args.gt)
    metrics = evaluate(pred, gt, args.min_depth, args.max_depth)
    print(json.dumps(metrics.as_dict(), indent=2, sort_keys=True))
    return 0


def cmd_augment(args) -> int:
    aug = resolve_augment(
        scale=args.scale if args.scale is not None else 1.0,
        rotation=math.radians(args.rotation) if args.rotation is not None else 0.0,
        pitch_jitter_max=math.radians(args.pitch_jitter),
        rot_jitter_max=math.radians(args.rot_jitter),
        seed=args.seed,
    )
    cio.save_json(args.out, cio.augment_to_dict(aug))
    print(f"wrote {args.out}")
    return 0


def cmd_render(args) -> int:
    scene = scene_from_dict(cio.load_json(args.scene))
    camera = _load_camera(args.camera)
    if args.size:
        height, width = _parse_hw(args.size, "--size")
    else:
        width, height = camera.width, camera.height
    lut = obtain_lut(camera, width=width, height=height, cache_dir=args.lut_cache)
    pose = None
    if args.pitch:
        pose = tangent_frame(pitch_to_center_lat(math.radians(args.pitch)), 0.0)
    image, depth = render(
        scene, camera, width=width, height=height, pose=pose, lut=lut, shading=args.shading
    )
    img_path, depth_path, mask_path = _out_paths(args.out, "render")
    cio.save_image(img_path, image)
    cio.write_pfm(depth_path, depth)
    cio.save_mask(mask_path, depth.valid)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="camwarp",
        description="Convert images and metric depth between perspective, fisheye, and ERP representations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="warp an image/depth map into an ERP patch")
    p.add_argument("--image", help="input image (PNG)")
    p.add_argument("--depth", help="input Euclidean depth (PFM)")
    p.add_argument("--camera", required=True, help="camera config JSON")
    p.add_argument("--erp-height", type=int, help="full ERP height in pixels")
    p.add_argument("--patch", help="patch size HxW in pixels")
    p.add_argument("--pitch", type=float, default=0.0, help="camera pitch in degrees (patch center latitude = -pitch)")
    p.add_argument("--center-lon", type=float, default=0.0, help="patch center longitude in degrees")
    p.add_argument("--pitch-jitter", type=float, default=0.0, help="max latitude jitter in degrees")
    p.add_argument("--rot-jitter", type=float, default=0.0, help="max in-plane rotation jitter in degrees")
    p.add_argument("--rotation", type=float, help="fixed in-plane rotation in degrees")
    p.add_argument("--scale", type=float, help="fixed tangent-plane scale")
    p.add_argument("--fov-align", action="store_true", help="scale content so the camera FoV fills the patch")
    p.add_argument("--ratios", default="1.0", help="comma-separated resize ratios, e.g. 1.0,0.7,0.4")
    p.add_argument("--aug", help="augmentation JSON (degrees)")
    p.add_argument("--seed", type=int, help="seed for jitter sampling")
    p.add_argument("--depth-interp", choices=("nearest", "bilinear"), default="nearest")
    p.add_argument("--replay", help="sidecar JSON; reproduces a previous run exactly")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("invert", help="warp ERP-patch content back to the camera image")
    p.add_argument("--erp-image", help="ERP patch image (PNG)")
    p.add_argument("--erp-depth", help="ERP patch depth (PFM)")
    p.add_argument("--camera", required=True)
    p.add_argument("--spec", required=True, help="patch spec JSON or convert sidecar")
    p.add_argument("--lut", help="lookup-table cache file")
    p.add_argument("--lut-cache", help="directory for cached lookup tables")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("lut-gen", help="build and store a lookup table")
    p.add_argument("--camera", required=True)
    p.add_argument("--size", help="table size HxW (default: camera size)")
    p.add_argument("--resolution", type=int, default=2048, help="coarse search grid resolution")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_lut_gen)

    p = sub.add_parser("unproject", help="lift a depth map to a PLY point cloud")
    p.add_argument("--depth", required=True)
    p.add_argument("--camera", required=True)
    p.add_argument("--image", help="optional image for point colors")
    p.add_argument("--spec", help="patch spec for ERP patch depth maps")
    p.add_argument("--lut", help="lookup-table cache file")
    p.add_argument("--lut-cache")
    p.add_argument("--ascii", action="store_true", help="write ASCII PLY")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_unproject)

    p = sub.add_parser("eval", help="compare predicted and ground-truth depth")
    p.add_argument("--pred", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--min-depth", type=float, required=True)
    p.add_argument("--max-depth", type=float, required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("augment", help="sample augmentation parameters to JSON")
    p.add_argument("--scale", type=float)
    p.add_argument("--rotation", type=float, help="fixed rotation in degrees")
    p.add_argument("--pitch-jitter", type=float, default=0.0)
    p.add_argument("--rot-jitter", type=float, default=0.0)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("render", help="render an analytic scene to image + depth")
    p.add_argument("--scene", required=True, help="scene config JSON")
    p.add_argument("--camera", required=True)
    p.add_argument("--size", help="render size HxW (default: camera size)")
    p.add_argument("--pitch", type=float, default=0.0, help="camera pitch in degrees")
    p.add_argument("--shading", choices=("scene", "smooth"), default="scene")
    p.add_argument("--lut-cache")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"camwarp: config error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"camwarp: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"camwarp: i/o error: {exc}", file=sys.stderr)
        return 3
    except CamwarpError as exc:
        print(f"camwarp: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
