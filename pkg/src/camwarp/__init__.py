"""camwarp: camera-geometry toolkit for cross-projection image and depth work.

Converts images and metric depth maps between perspective, fisheye
(Kannala-Brandt and MEI), and equirectangular representations via gnomonic
grid sampling; rescales metric depth across focal lengths and resolutions;
inverts distorted projections with lookup tables; lifts depth to point
clouds; and evaluates metric depth predictions.
"""

from .cameras import (
    CameraModel,
    ErpCamera,
    Intrinsics,
    KannalaBrandtCamera,
    KbDistortion,
    MeiCamera,
    MeiDistortion,
    PerspectiveCamera,
    camera_from_dict,
    camera_to_dict,
    kb_project_naive,
)
from .depth import (
    DepthMap,
    PointCloud,
    camera_rays,
    euclidean_to_z,
    rescale_for_canonical,
    rescale_for_resize,
    unproject_depth,
    virtual_focal,
    z_to_euclidean,
)
from .erp import (
    AugmentParams,
    ErpPatchSpec,
    WarpGrid,
    build_erp_to_image_grid,
    build_image_to_erp_grid,
    erp_pixel_to_spherical,
    fov_align_scale,
    spherical_to_erp_pixel,
)
from .errors import (
    CamwarpError,
    ConfigError,
    DimensionMismatchError,
    DomainError,
    EmptyEvaluationError,
    LutUnsupportedError,
    MissingLutError,
)
from .geometry import (
    angular_cos,
    gnomonic_forward,
    gnomonic_inverse,
    latlon_to_unit,
    normalize_lon,
    tangent_frame,
    unit_to_latlon,
)
from .lut import LookupTable, build_lookup_table
from .metrics import DepthMetrics, evaluate
from .resample import multi_resolution_set, sample, sample_depth, sample_image
from .scenes import AxisBox, CheckerSphere, ConcentricSphere, Plane, Scene, render

__version__ = "0.1.0"

__all__ = [
    "AugmentParams",
    "AxisBox",
    "CameraModel",
    "CamwarpError",
    "CheckerSphere",
    "ConcentricSphere",
    "ConfigError",
    "DepthMap",
    "DepthMetrics",
    "DimensionMismatchError",
    "DomainError",
    "EmptyEvaluationError",
    "ErpCamera",
    "ErpPatchSpec",
    "Intrinsics",
    "KannalaBrandtCamera",
    "KbDistortion",
    "LookupTable",
    "LutUnsupportedError",
    "MeiCamera",
    "MeiDistortion",
    "MissingLutError",
    "PerspectiveCamera",
    "Plane",
    "PointCloud",
    "Scene",
    "WarpGrid",
    "angular_cos",
    "build_erp_to_image_grid",
    "build_image_to_erp_grid",
    "build_lookup_table",
    "camera_from_dict",
    "camera_rays",
    "camera_to_dict",
    "erp_pixel_to_spherical",
    "euclidean_to_z",
    "evaluate",
    "fov_align_scale",
    "gnomonic_forward",
    "gnomonic_inverse",
    "kb_project_naive",
    "latlon_to_unit",
    "multi_resolution_set",
    "normalize_lon",
    "render",
    "rescale_for_canonical",
    "rescale_for_resize",
    "sample",
    "sample_depth",
    "sample_image",
    "spherical_to_erp_pixel",
    "tangent_frame",
    "unit_to_latlon",
    "unproject_depth",
    "virtual_focal",
    "z_to_euclidean",
]
