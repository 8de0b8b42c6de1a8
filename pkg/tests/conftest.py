import math
from pathlib import Path

import numpy as np
import pytest
from scipy.integrate import quad

from harmcert import fixtures
from harmcert.oracle import poisson_density

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def tri():
    return fixtures.rounded_triangle()


@pytest.fixture(scope="session")
def disk():
    return fixtures.unit_disk()


@pytest.fixture(scope="session")
def offdisk():
    return fixtures.off_center_disk(0.1)


def disk_patch_probability(center, R, pole, w, delta):
    """Harmonic measure (pole ``pole``) of the arc of the circle |y - c| = R inside B(w, delta).

    Integrates the Poisson kernel along the arc with adaptive quadrature.
    """
    c = np.asarray(center, dtype=float)
    w = np.asarray(w, dtype=float)
    alpha = math.atan2(w[1] - c[1], w[0] - c[0])
    # chord length delta subtends half-angle 2 asin(delta / 2R)
    beta = 2 * math.asin(delta / (2 * R))

    def f(t):
        y = c + R * np.array([math.cos(t), math.sin(t)])
        return poisson_density(c, R, 2, pole, y) * R

    val, _ = quad(f, alpha - beta, alpha + beta, epsabs=1e-14, epsrel=1e-12)
    return val
