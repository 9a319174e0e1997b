import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from stc.spin import Rotation3, SpinParams

settings.register_profile(
    "default", deadline=None, max_examples=30, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

angles = st.floats(-2 * np.pi, 2 * np.pi, allow_nan=False)
unit_interval = st.floats(-1.0, 1.0, allow_nan=False)


@st.composite
def rotations(draw):
    v = np.array([draw(unit_interval) for _ in range(3)])
    if np.linalg.norm(v) < 1e-3:
        v = np.array([0.0, 0.0, 1.0])
    return Rotation3.about(v, draw(angles))


@st.composite
def hermitian_matrices(draw, max_dim=8):
    n = draw(st.integers(1, max_dim))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


@st.composite
def spin_params(draw, aligned=True):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    h = rng.uniform(-30, 30, 4) if aligned else rng.normal(size=(4, 3)) * 10
    j1, j2, jsc = rng.normal(size=3)
    return SpinParams(h=h, j1=j1, j2=j2, jsc=jsc,
                      rot1=draw(rotations()), rotsc=draw(rotations()), rot2=draw(rotations()))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_rotation(rng):
    return Rotation3.about(rng.normal(size=3), rng.uniform(0, 2 * np.pi))


def random_hermitian(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (a + a.conj().T) / 2
