import numpy as np
import pytest


@pytest.fixture(scope="session")
def alpha_family():
    """The random coefficient family shared by the roundtrip and
    identity tests: 100 rows of 8 coefficients, uniform in (-0.8, 0.8),
    fixed seed so failures are reproducible."""
    rng = np.random.default_rng(20230814)
    return rng.uniform(-0.8, 0.8, size=(100, 8))
