import numpy as np
import pytest

from instance_geom.instances import InstanceSpec, generate
from instance_geom.presets import SLAB_POINTS, THREE_PARTITION_POINTS, three_partition


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def three_partition_points():
    return THREE_PARTITION_POINTS


@pytest.fixture
def three_partition_fixture():
    return three_partition()


@pytest.fixture
def slab_points():
    return SLAB_POINTS


@pytest.fixture
def make():
    def _make(family, n, seed=0, **params):
        return generate(InstanceSpec(family, n, seed, params))

    return _make
