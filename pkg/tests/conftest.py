import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("repo")


def random_sym(rng, n, lo=-5.0, hi=5.0):
    M = rng.uniform(lo, hi, (n, n))
    return 0.5 * (M + M.T)


def random_psd(rng, n, scale=1.0):
    B = rng.normal(size=(n, n)) * scale
    return B @ B.T


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
