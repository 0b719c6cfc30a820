import math

import pytest

from tiltsense.fluids import get_fluid, shipped_fluids
from tiltsense.solver import SensorGeometry, SolverConfig

GASES = ("He", "N2", "CO2", "air")
LIQUIDS = ("SAE50", "Rhodorsil-47V100", "ethylene-glycol")


@pytest.fixture(scope="session")
def fluids():
    return {f.name: f for f in shipped_fluids()}


@pytest.fixture(scope="session")
def air():
    return get_fluid("air")


@pytest.fixture
def geometry():
    return SensorGeometry()


@pytest.fixture
def tilted():
    return SensorGeometry(tilt_angle=math.radians(30.0))


@pytest.fixture
def config():
    return SolverConfig()
