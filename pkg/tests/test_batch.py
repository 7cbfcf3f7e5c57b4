from collections import Counter

import pytest

from profile_sampler import batch
from profile_sampler.mappings import random_map_profile
from profile_sampler.oracle import chi_square_uniformity, exact_profile_distribution, two_sample_chi_square
from profile_sampler.surjections import random_surjection_profile


@pytest.mark.parametrize("n, k", [(4, 2), (9, 2), (10, 3)])
def test_map_tally_matches_scalar(rng, n, k):
    a = batch.map_profile_tally(rng, n, k, 10**5)
    b = Counter(random_map_profile(rng, n, k)[0].pairs for _ in range(10**5))
    assert sum(a.values()) == 10**5
    assert two_sample_chi_square(a, b) > 1e-3


@pytest.mark.parametrize("n, k, method, kind", [
    (4, 2, "coupon", None), (4, 2, "boltzmann", "13"), (4, 2, "boltzmann", "general"),
    (7, 5, "boltzmann", "13"), (10, 3, "boltzmann", "general"), (9, 2, "coupon", None),
])
def test_surjection_tally_matches_scalar(rng, n, k, method, kind):
    a = batch.surjection_profile_tally(rng, n, k, 5 * 10**4, method=method, round_kind=kind)
    b = Counter(random_surjection_profile(rng, n, k, method=method, round_kind=kind)[0].pairs
                for _ in range(5 * 10**4))
    assert sum(a.values()) == 5 * 10**4
    assert two_sample_chi_square(a, b) > 1e-3
    assert chi_square_uniformity(a, exact_profile_distribution(n, k, "surjection")) > 1e-3


def test_rounds_accounting(rng):
    _, rounds = batch.boltzmann_tally(rng, 10**4, 6000, 5000)
    scalar = sum(random_surjection_profile(rng, 10**4, 6000, method="boltzmann")[1].rounds
                 for _ in range(5000))
    assert abs(rounds - scalar) < 0.15 * scalar


def test_fallback_large_k(rng):
    t = batch.map_profile_tally(rng, 100, 20, 200)
    assert sum(t.values()) == 200
    t = batch.surjection_profile_tally(rng, 1000, 20, 100, method="coupon")
    assert all(pairs[0][0] >= 1 for pairs in t)


def test_full_surjection_tally(rng):
    t = batch.surjection_tally(rng, 3, 2, 6 * 10**4)
    assert len(t) == 6 and sum(t.values()) == 6 * 10**4
    assert chi_square_uniformity(t, {x: 1 / 6 for x in t}) > 1e-3
    assert batch.surjection_profile_tally(rng, 5, 5, 10) == Counter({((1, 5),): 10})
    with pytest.raises(ValueError):
        batch.surjection_profile_tally(rng, 2, 5, 10)
