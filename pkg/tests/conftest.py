import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gammadil.rng import XorShiftStar

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return XorShiftStar(20240611)


def hermitian(rng, n):
    B = rng.complex_array((n, n))
    return B + B.conj().T


def assert_close(a, b, tol):
    diff = np.linalg.norm(np.asarray(a) - np.asarray(b), 2) if np.size(a) else 0.0
    assert diff <= tol, f"difference {diff:.3e} exceeds {tol:.1e}"
