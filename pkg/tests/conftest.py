import numpy as np
import pytest

from spinbundles.config_space import sample_sphere


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def points(rng):
    """2048 uniform sphere points shared across property tests."""
    return sample_sphere(2048, rng)


@pytest.fixture
def many_points():
    return sample_sphere(10_000, np.random.default_rng(555))
