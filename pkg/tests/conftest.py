import numpy as np
import pytest

from auricle import spherical_head_database


@pytest.fixture(scope="session")
def sphere_db():
    return spherical_head_database()


@pytest.fixture
def rng():
    return np.random.default_rng(20250818)
