import numpy as np
import pytest

from camwarp import (
    ErpCamera,
    Intrinsics,
    KannalaBrandtCamera,
    KbDistortion,
    MeiCamera,
    MeiDistortion,
    PerspectiveCamera,
    build_lookup_table,
)


@pytest.fixture(scope="session")
def persp_camera():
    return PerspectiveCamera(Intrinsics(fx=100.0, fy=100.0, cx=80.0, cy=60.0), width=160, height=120)


@pytest.fixture(scope="session")
def kb_camera():
    # Near-180-degree fisheye: the image edge sits at ~92 degrees incidence.
    return KannalaBrandtCamera(
        Intrinsics(fx=50.0, fy=50.0, cx=80.0, cy=80.0),
        KbDistortion(k1=-0.01, k2=0.002, k3=-0.0005, k4=0.0001),
        width=160,
        height=160,
    )


@pytest.fixture(scope="session")
def mei_camera():
    return MeiCamera(
        Intrinsics(fx=90.0, fy=90.0, cx=80.0, cy=80.0),
        MeiDistortion(xi=0.8, k1=-0.05, k2=0.01, p1=0.001, p2=-0.0005),
        width=160,
        height=160,
    )


@pytest.fixture(scope="session")
def erp_camera():
    return ErpCamera(erp_height=200)


@pytest.fixture(scope="session")
def kb_lut(kb_camera):
    return build_lookup_table(kb_camera, kb_camera.width, kb_camera.height, search_resolution=768)


@pytest.fixture(scope="session")
def mei_lut(mei_camera):
    return build_lookup_table(mei_camera, mei_camera.width, mei_camera.height, search_resolution=768)


def random_unit_rays(rng: np.random.Generator, n: int, min_z: float | None = None) -> np.ndarray:
    """Uniformly distributed unit rays, optionally restricted to z > min_z."""
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=-1, keepdims=True)
    if min_z is not None:
        v = v[v[:, 2] > min_z]
    return v
