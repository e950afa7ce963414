"""The three metric depth-scaling rules, with the constants used in practice.

Canonical-camera conversion, resize-induced rescaling, and the virtual focal
length of an ERP space, demonstrated numerically on a synthetic map.
"""

import numpy as np

from camwarp import (
    DepthMap,
    multi_resolution_set,
    rescale_for_canonical,
    rescale_for_resize,
    virtual_focal,
)

depth = DepthMap.from_values(np.full((500, 700), 10.0))

# Rule 1: converting a camera with focal length f to a canonical model f_hat
# multiplies depth by f_hat / f. Standard canonical focal lengths: 519
# (indoor) and 721 (outdoor).
for f_cano in (519.0, 721.0):
    scaled = rescale_for_canonical(depth, f=500.0, f_hat=f_cano)
    print(f"10 m at f=500 becomes {scaled.values[0, 0]:.2f} m under f_cano={f_cano:.0f}")

# Rule 2: resizing an image by a ratio r multiplies depth by 1/r, because the
# same object now subtends fewer pixels, as if seen from farther away.
print(f"500 -> 250 px resize: depth factor {rescale_for_resize(500, 250):.2f}")
print(f"700 -> 490 px resize: depth factor {rescale_for_resize(700, 490):.4f}")

image = np.zeros((500, 700, 3), dtype=np.uint8)
for img, dep, scale in multi_resolution_set(image, depth, ratios=(1.0, 0.7, 0.4)):
    print(f"  pyramid level {img.shape[1]}x{img.shape[0]}: depth x{scale:.4f} "
          f"-> {dep.values[dep.valid][0]:.2f} m")

# Rule 3: an ERP space has no focal length; its equivalent is the pinhole
# focal that spans one latitude step, 1 / tan(pi / H_erp).
h = 1400
f_virt = virtual_focal(h)
print(f"ERP height {h}: f_virtual = {f_virt:.2f} px")
print(f"prediction alignment factor f_cano/f_virtual = {519.0 / f_virt:.4f}")
