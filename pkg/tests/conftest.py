import numpy as np
import pytest

from wosq.experiments import builtin_example


@pytest.fixture(scope="session")
def disk_example():
    return builtin_example("disk")


@pytest.fixture(scope="session")
def ball_example():
    return builtin_example("ball")


@pytest.fixture(scope="session")
def sector_example():
    return builtin_example("sector")


@pytest.fixture(scope="session")
def dumbbell_example():
    return builtin_example("dumbbell")


@pytest.fixture(scope="session")
def gasket_example():
    return builtin_example("gasket")


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


def interior_points(domain, n, rng, margin=0.0):
    """Rejection-sample n interior points of a domain."""
    r = domain.r_max
    out = []
    while len(out) < n:
        z = rng.uniform(-r, r, size=domain.dim)
        if domain.contains(z, tol=-1e-9) and domain.boundary_distance(z) > margin:
            out.append(z)
    return np.array(out)
