import math
from collections import Counter

import numpy as np
import pytest

from profile_sampler.mappings import (
    MapLevel,
    base_case_threshold,
    naive_boltzmann_profile,
    random_map_profile,
    simulate_profile,
    small_k_profile,
)
from profile_sampler.oracle import (
    chi_square_uniformity,
    exact_profile_distribution,
    tv_distance,
    two_sample_chi_square,
)
from profile_sampler.profile import profile_validate
from profile_sampler.special import log_poisson_pmf


def test_small_k_examples(rng):
    assert small_k_profile(rng, 9, 1).pairs == ((9, 1),)
    assert small_k_profile(rng, 0, 5).pairs == ((0, 5),)
    tally = Counter(small_k_profile(rng, 4, 2).pairs for _ in range(10**5))
    exact = exact_profile_distribution(4, 2)
    assert set(exact) == {((0, 1), (4, 1)), ((1, 1), (3, 1)), ((2, 2),)}
    assert chi_square_uniformity(tally, exact) > 1e-3


def test_simulate_single_value(rng):
    lam = 3.7
    tally = Counter()
    for _ in range(2 * 10**5):
        out = simulate_profile(rng, 1, lam)
        (x, c), = out.profile.pairs
        assert c == 1 and out.sum == x and out.window >= 2
        tally[x] += 1
    exact = {j: math.exp(log_poisson_pmf(lam, j)) for j in range(80)}
    assert chi_square_uniformity(tally, exact) > 1e-3


def test_simulate_two_zeros(rng):
    runs = 3 * 10**5
    hits = sum(simulate_profile(rng, 2, 1.0).profile.pairs == ((0, 2),) for _ in range(runs))
    p = math.exp(-2)
    assert abs(hits / runs - p) <= 3 * math.sqrt(p * (1 - p) / runs)


@pytest.mark.parametrize("k, lam", [(1, 0.2), (5, 1.0), (40, 17.3), (1000, 0.01), (1000, 250.0)])
def test_simulate_conservation(rng, k, lam):
    for _ in range(200):
        out = simulate_profile(rng, k, lam)
        assert sum(c for _, c in out.profile.pairs) == k
        assert out.sum == sum(s * c for s, c in out.profile.pairs)
        assert profile_validate(out.profile, out.sum, k) is None


def test_simulate_matches_iid_poisson(rng):
    k, lam = 3, 1.4
    a = Counter(simulate_profile(rng, k, lam).profile.pairs for _ in range(10**5))
    b = Counter()
    for row in rng.gen.poisson(lam, size=(10**5, k)):
        b[tuple(sorted(Counter(row.tolist()).items()))] += 1
    assert two_sample_chi_square(a, b) > 1e-3


def test_naive_boltzmann(rng):
    assert naive_boltzmann_profile(rng, 0, 3)[0].pairs == ((0, 3),)
    p, st = naive_boltzmann_profile(rng, 12, 1)
    assert p.pairs == ((12, 1),) and st.rounds >= 1
    a = Counter(naive_boltzmann_profile(rng, 4, 2)[0].pairs for _ in range(3 * 10**4))
    b = Counter(small_k_profile(rng, 4, 2).pairs for _ in range(3 * 10**4))
    assert two_sample_chi_square(a, b) > 1e-3


def test_naive_rounds_single_class(rng):
    n = 30
    rounds = [naive_boltzmann_profile(rng, n, 1)[1].rounds for _ in range(4000)]
    expected = 1 / math.exp(log_poisson_pmf(n, n))
    sd = math.sqrt(expected * (expected - 1) / len(rounds))
    assert abs(np.mean(rounds) - expected) < 4 * sd


def test_trivial_cases(rng):
    assert random_map_profile(rng, 17, 1)[0].pairs == ((17, 1),)
    assert random_map_profile(rng, 0, 100)[0].pairs == ((0, 100),)
    with pytest.raises(ValueError):
        random_map_profile(rng, 3, 0)


@pytest.mark.parametrize("n, k", [(4, 2), (6, 3), (10, 4), (3, 4)])
def test_forced_recursion_exact(rng, n, k):
    # base_k=1 forces the early-rejection recursion down to k = 1
    tally = Counter(random_map_profile(rng, n, k, base_k=1)[0].pairs for _ in range(10**5))
    exact = exact_profile_distribution(n, k)
    assert chi_square_uniformity(tally, exact) > 1e-3
    assert tv_distance(tally, exact) < 0.01


def test_recursion_first_level_mean(rng):
    # E[N_1 / k_1] = n / k after one accepted level
    n, k = 1000, 64
    level = MapLevel(n, k)
    vals = []
    for _ in range(20000):
        pairs = []
        while True:
            ok, s, _ = level.round(rng, pairs)
            if ok:
                break
        vals.append((n - s) / level.k_right)
    vals = np.array(vals)
    assert abs(vals.mean() - n / k) < 3 * vals.std() / math.sqrt(vals.size)


@pytest.mark.parametrize("n, k", [(10**12, 10**6), (10**18, 3981), (10**6, 10**6), (5 * 10**5, 10**6), (10**9, 999)])
def test_large_inputs_validate(rng, n, k):
    p, st = random_map_profile(rng, n, k)
    assert profile_validate(p, n, k) is None
    assert st.rounds >= st.accepted == st.recursion_depth
    if k > base_case_threshold(n):
        assert st.recursion_depth >= 1


def test_acceptance_rate_floor(rng):
    for n, k in [(3, 9), (100, 10), (10**6, 1000)]:
        level = MapLevel(n, k)
        acc = sum(level.round(rng, [])[0] for _ in range(5000))
        assert acc / 5000 >= 0.1


def test_base_threshold():
    assert base_case_threshold(1) == 8
    assert base_case_threshold(10**12) == 10**4
    assert base_case_threshold(10**12 - 1) == 9999
