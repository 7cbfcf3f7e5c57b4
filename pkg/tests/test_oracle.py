import json
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from profile_sampler.oracle import (
    ENUM_MAX_K,
    ENUM_MAX_N,
    OracleRangeError,
    chi_square_statistic,
    chi_square_uniformity,
    distribution_from_json,
    distribution_to_json,
    exact_acceptance_probability,
    exact_profile_distribution,
    exact_weights,
    stirling2,
    tv_distance,
)


def stirling_inclusion_exclusion(n, k):
    return sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1)) // math.factorial(k)


def test_stirling_values():
    assert stirling2(4, 2) == 7
    assert stirling2(6, 2) == 31
    for n in range(0, 40):
        assert stirling2(n, n) == 1
        if n:
            assert stirling2(n, 1) == 1
    for n, k in [(10, 3), (50, 7), (200, 100), (500, 250), (500, 3)]:
        assert stirling2(n, k) == stirling_inclusion_exclusion(n, k)
    assert stirling2(5, 7) == 0
    with pytest.raises(OracleRangeError):
        stirling2(501, 3)


def test_distribution_examples():
    assert exact_profile_distribution(4, 2) == {
        ((0, 1), (4, 1)): Fraction(2, 16), ((1, 1), (3, 1)): Fraction(8, 16), ((2, 2),): Fraction(6, 16)}
    assert exact_profile_distribution(4, 2, "surjection") == {
        ((1, 1), (3, 1)): Fraction(8, 14), ((2, 2),): Fraction(6, 14)}
    for k in range(1, 7):
        assert exact_profile_distribution(k, k, "surjection") == {((1, k),): 1}
    with pytest.raises(OracleRangeError):
        exact_profile_distribution(15, 2)
    with pytest.raises(OracleRangeError):
        exact_profile_distribution(5, 7)
    with pytest.raises(ValueError):
        exact_profile_distribution(5, 2, "other")


def test_distribution_invariants_full_cap():
    for k in range(1, ENUM_MAX_K + 1):
        for n in range(0, ENUM_MAX_N + 1):
            w, total = exact_weights(n, k)
            assert total == k**n
            assert sum(exact_profile_distribution(n, k).values()) == 1
            if n >= k:
                w, total = exact_weights(n, k, "surjection")
                assert total == math.factorial(k) * stirling2(n, k)
                dist = exact_profile_distribution(n, k, "surjection")
                assert sum(dist.values()) == 1
                assert all(p.denominator * 1 <= total for p in dist.values())


def test_distribution_against_brute_force():
    import itertools
    for n, k in [(5, 3), (6, 2), (4, 4)]:
        tally = Counter()
        for f in itertools.product(range(k), repeat=n):
            sv = Counter(f)
            tally[tuple(sorted(Counter(sv[i] for i in range(k)).items()))] += 1
        assert exact_profile_distribution(n, k) == {x: Fraction(c, k**n) for x, c in tally.items()}


def test_acceptance_probability():
    assert exact_acceptance_probability(4, 2) == pytest.approx(0.2446, abs=1e-4)
    a = exact_acceptance_probability(101, 100)
    assert 0.2 < a < 0.6
    assert exact_acceptance_probability(5, 5) == 1.0
    with pytest.raises(OracleRangeError):
        exact_acceptance_probability(501, 10)


def test_acceptance_probability_direct():
    # coefficient extraction by exact convolution at small sizes
    from profile_sampler.saddle import solve_omega
    for n, k in [(4, 2), (7, 3), (12, 5)]:
        w = solve_omega(n, k).omega
        pmf = [0.0] + [w**j / math.factorial(j) / math.expm1(w) for j in range(1, n + 1)]
        dist = [1.0] + [0.0] * n
        for _ in range(k):
            dist = [sum(dist[i] * pmf[m - i] for i in range(m + 1)) for m in range(n + 1)]
        assert exact_acceptance_probability(n, k) == pytest.approx(dist[n], rel=1e-10)


def test_chi_square_exact_proportions():
    exact = {"a": 0.5, "b": 0.3, "c": 0.2}
    stat, dof, p = chi_square_statistic({"a": 5000, "b": 3000, "c": 2000}, exact)
    assert stat == 0 and p == 1.0 and dof == 2


def test_chi_square_degenerate_and_support():
    with pytest.raises(ValueError):
        chi_square_uniformity({"a": 10**4}, {"a": 1})
    assert chi_square_uniformity({"a": 5000, "z": 1}, {"a": 0.5, "b": 0.5}) == 0.0


def test_chi_square_pools_small_cells():
    exact = {i: p for i, p in enumerate([0.5, 0.4999] + [1e-5] * 10)}
    stat, dof, p = chi_square_statistic({0: 5000, 1: 5000}, exact)
    assert dof == 1


def test_chi_square_self_test():
    # an independent inverse-CDF sampler passes at the 1e-3 level
    g = np.random.default_rng(99)
    exact = exact_profile_distribution(8, 4)
    keys = list(exact)
    cdf = np.cumsum([float(exact[x]) for x in keys])
    passes = 0
    for _ in range(1000):
        idx = np.searchsorted(cdf, g.random(10**4) * cdf[-1], side="right")
        counts = np.bincount(idx, minlength=len(keys))
        passes += chi_square_uniformity(dict(zip(keys, counts)), exact) > 1e-3
    assert passes >= 995


def test_chi_square_power():
    g = np.random.default_rng(5)
    exact = {x: float(p) for x, p in exact_profile_distribution(6, 3).items()}
    keys = list(exact)
    probs = np.array([exact[x] for x in keys])
    probs[0] *= 1.1
    probs /= probs.sum()
    counts = g.multinomial(10**6, probs)
    assert chi_square_uniformity(dict(zip(keys, counts)), exact) < 1e-6


def test_tv_distance():
    assert tv_distance({"a": 3, "b": 1}, {"a": 0.75, "b": 0.25}) == pytest.approx(0)
    assert tv_distance({"a": 3}, {"b": 1}) == 1
    assert tv_distance({"a": 0.6, "b": 0.4}, {"a": 0.5, "b": 0.5}) == pytest.approx(0.1)


def test_json_export():
    d = exact_profile_distribution(5, 3, "surjection")
    text = distribution_to_json(d)
    assert distribution_from_json(text) == d
    assert json.loads(text)[0].keys() == {"pairs", "num", "den"}
