import pytest

from profile_sampler.variates import RandomSource


@pytest.fixture
def rng():
    return RandomSource(20240611)
