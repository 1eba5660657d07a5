import numpy as np
import pytest

from kmtheta.fixtures import canonical_fixture, rank3_fixture
from kmtheta.geometry import SurfaceChart
from kmtheta.lattice import majorant_on_S
from kmtheta.quadspace import InnerProductSpace


@pytest.fixture(scope="session")
def fixture22():
    return canonical_fixture()


@pytest.fixture(scope="session")
def config(fixture22):
    return fixture22.config


@pytest.fixture(scope="session")
def chart(config):
    return SurfaceChart(config)


@pytest.fixture(scope="session")
def majorant_S(chart):
    return majorant_on_S(chart)


@pytest.fixture(scope="session")
def fixture33():
    return rank3_fixture()


@pytest.fixture(scope="session")
def V22():
    return InnerProductSpace(np.diag([1.0, 1.0, -1.0, -1.0]))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
