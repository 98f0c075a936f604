import numpy as np
import pytest

from refinery import ClassConditionalModel, GaussianDensity, GridDensity

GAUSSIAN_SEPARATIONS = (0.1, 1.5, 4.0)


def gaussian_pair(mu, prior=0.5):
    return ClassConditionalModel(d_pos=GaussianDensity(mu, 1.0),
                                 d_neg=GaussianDensity(-mu, 1.0),
                                 prior=prior)


@pytest.fixture
def gaussian_models():
    return {mu: gaussian_pair(mu) for mu in GAUSSIAN_SEPARATIONS}


@pytest.fixture
def identical_model():
    """Indistinguishable classes: uniform conditionals on [0, 1]."""
    uniform = GridDensity(lo=0.0, hi=1.0, mass=np.ones(8))
    return ClassConditionalModel(d_pos=uniform, d_neg=uniform, prior=0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
