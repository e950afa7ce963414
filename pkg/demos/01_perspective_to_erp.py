"""Walk a perspective image into the ERP space and back.

Renders an analytic scene, places it at a pitched latitude the way a tilted
camera would see it, converts to an ERP patch, then maps the patch back to
the camera and reports the round-trip PSNR. Outputs land in demos/out/.

Note the inverse grid maps the plain (unaugmented) patch placement, matching
the inference-time path where predictions are warped back for visualization;
augmentations like FoV alignment are a training-time, one-way operation.
"""

import math
import os

import numpy as np

from camwarp import (
    CheckerSphere,
    ConcentricSphere,
    ErpPatchSpec,
    Intrinsics,
    PerspectiveCamera,
    build_erp_to_image_grid,
    build_image_to_erp_grid,
    fov_align_scale,
    render,
    sample_image,
)
from camwarp.io import save_image, save_mask

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

camera = PerspectiveCamera(Intrinsics(fx=320.0, fy=320.0, cx=240.0, cy=180.0), width=480, height=360)
image, _ = render(CheckerSphere(radius=2.0, period=math.radians(15.0)), camera)
save_image(os.path.join(OUT, "01_input.png"), image)

# A camera pitched 25 degrees up lands at latitude -25 degrees, toward the
# top of the ERP space where the gnomonic distortion is strong.
pitch = math.radians(25.0)
spec = ErpPatchSpec(erp_height=1000, patch_h=340, patch_w=460, center_lat=-pitch)
print(f"patch FoV {math.degrees(spec.vertical_fov):.1f} deg, "
      f"camera FoV {math.degrees(camera.vertical_fov):.1f} deg; "
      f"FoV alignment would scale content by {fov_align_scale(camera.vertical_fov, spec):.3f}")

to_erp = build_image_to_erp_grid(spec, camera)
erp_image, erp_valid = sample_image(to_erp, image)
save_image(os.path.join(OUT, "01_erp_patch.png"), erp_image)
save_mask(os.path.join(OUT, "01_erp_mask.png"), erp_valid)
print(f"ERP patch: {erp_image.shape[1]}x{erp_image.shape[0]}, "
      f"{erp_valid.mean() * 100:.0f}% covered by camera content")

back = build_erp_to_image_grid(spec, camera)
recovered, rec_valid = sample_image(back, erp_image)
save_image(os.path.join(OUT, "01_recovered.png"), recovered)

# PSNR is meaningful on smooth content; measure it on a gradient rendering.
smooth, _ = render(ConcentricSphere(2.0), camera, shading="smooth")
erp_smooth, _ = sample_image(to_erp, smooth)
rec_smooth, _ = sample_image(back, erp_smooth)
carried, _ = sample_image(back, erp_valid.astype(np.float64), interp="bilinear")
joint = rec_valid & (carried > 1 - 1e-9)
diff = (smooth.astype(np.float64) - rec_smooth.astype(np.float64)) / 255.0
mse = max(float(np.mean(diff[joint] ** 2)), 1e-12)
print(f"round-trip PSNR {10 * math.log10(1 / mse):.1f} dB "
      f"on {joint.mean() * 100:.0f}% of pixels (smooth gradient)")
