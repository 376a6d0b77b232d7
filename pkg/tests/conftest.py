from fractions import Fraction

import pytest

from hermix.moments import exponential, gaussian
from hermix.rng import sample_mixture

TRUE_WEIGHTS = (Fraction(3, 10), Fraction(7, 10))


@pytest.fixture(scope="session")
def synthetic_sample():
    """Seed-0 draws of 0.3 N(0,1) + 0.7 Exp(1), N = 50000."""
    return sample_mixture([gaussian(0, 1), exponential(1)], TRUE_WEIGHTS, 50_000, seed=0)
