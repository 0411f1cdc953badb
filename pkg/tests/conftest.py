import numpy as np
import pytest

import helpers
from toricmetrics import canonical
from toricmetrics.calabi import calabi_potential


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


@pytest.fixture(scope="session")
def simplex():
    return helpers.standard_simplex(2)


@pytest.fixture(scope="session")
def square():
    return helpers.unit_cube(2)


@pytest.fixture(scope="session")
def interval():
    return helpers.unit_interval()


@pytest.fixture(scope="session")
def trapezoid_half():
    return helpers.trapezoid(0.5)


@pytest.fixture(scope="session")
def cube():
    return helpers.unit_cube(3)


@pytest.fixture(scope="session")
def simplex3():
    return helpers.standard_simplex(3)


@pytest.fixture(scope="session")
def hexagon():
    return helpers.hexagon()


@pytest.fixture(scope="session")
def test_potentials(simplex, square, interval, trapezoid_half):
    """The shipped (polytope, potential) pairs used across the suite."""
    return {
        "interval": canonical(interval),
        "simplex": canonical(simplex),
        "square": canonical(square),
        "trapezoid-canonical": canonical(trapezoid_half),
        "trapezoid-calabi": calabi_potential(0.5),
    }
