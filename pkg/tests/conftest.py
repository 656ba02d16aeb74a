import numpy as np
import pytest

from orbitlab.cluster import build_seed


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def seed2():
    return build_seed((1,), 2)


@pytest.fixture(scope="session")
def seed3():
    return build_seed((1, 2, 1), 3)


@pytest.fixture(scope="session")
def seed3_alt():
    return build_seed((2, 1, 2), 3)
