import numpy as np
import pytest

from totlab.curvelab import DemoConfiguration
from totlab.netcore import BipolarVector, train_hebbian
from totlab.resources import read_json_resource


REFERENCE = (1, -1, 1, 1, -1, 1, -1, -1, 1)

INTACT_CURVE = ("1", "1", "1", "1", "1", "31/32", "57/64", "99/128", "163/256", "1/2")


@pytest.fixture
def x():
    return BipolarVector(REFERENCE)


@pytest.fixture
def default_net(x):
    return train_hebbian(x)


@pytest.fixture
def demo():
    return DemoConfiguration.from_json(read_json_resource("demo_tot.json"))


@pytest.fixture
def golden():
    return read_json_resource("demo_tot_golden.json")


@pytest.fixture
def rng():
    return np.random.default_rng(0)
