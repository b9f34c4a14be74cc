import numpy as np
import pytest

from spinbound.measure import ClosedFormCircle, CurveDelta, Density
from spinbound.model import CouplingSpec, threshold


def bessel_j0_series(x):
    """J0 by its power series; independent of scipy.special.

    Accurate to ~1e-11 for |x| <= 12 in double precision (cancellation grows
    with x, so this oracle is only used at moderate arguments).
    """
    x = np.asarray(x, dtype=float)
    q = -0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 60):
        term = term * q / (k * k)
        total = total + term
    return total


@pytest.fixture(scope="session")
def rashba2():
    return CouplingSpec.rashba(2.0)


@pytest.fixture(scope="session")
def thr2(rashba2):
    return threshold(rashba2)


@pytest.fixture(scope="session")
def circle_measure():
    """nu = -delta on the unit circle."""
    return CurveDelta(ClosedFormCircle((0.0, 0.0), 1.0), weight=-1.0)


@pytest.fixture(scope="session")
def gaussian_well():
    """nu(dx) = -2 exp(-|x|^2/2) dx, truncated where the tail is ~1e-14."""
    return Density(lambda x, y: -2.0 * np.exp(-0.5 * (x * x + y * y)),
                   (-8.0, 8.0, -8.0, 8.0))
