import math

import numpy as np
import pytest

from profile_sampler.oracle import chi_square_uniformity, two_sample_chi_square
from profile_sampler.special import log_binomial_pmf, log_poisson_pmf
from profile_sampler.variates import (
    RandomSource,
    bernoulli,
    bernoulli_log,
    binomial,
    poisson,
    truncated_poisson_array,
)


def test_bernoulli_degenerate(rng):
    assert not any(bernoulli(rng, 0.0) for _ in range(1000))
    assert all(bernoulli(rng, 1.0) for _ in range(1000))
    assert all(bernoulli_log(rng, 0.0) for _ in range(100))
    assert not any(bernoulli_log(rng, -math.inf) for _ in range(100))


def test_bernoulli_domain(rng):
    with pytest.raises(ValueError):
        bernoulli(rng, 1.1)
    with pytest.raises(ValueError):
        bernoulli(rng, -0.01)
    # rounding excursions within 1e-9 are clamped
    assert bernoulli(rng, 1.0 + 1e-12)
    assert not bernoulli(rng, -1e-12)
    with pytest.raises(ValueError):
        bernoulli_log(rng, 0.1)


def test_bernoulli_quarter(rng):
    hits = sum(bernoulli(rng, 0.25) for _ in range(10**6))
    assert abs(hits / 10**6 - 0.25) < 0.0013
    assert rng.bernoulli_draws == 10**6


def test_binomial_edges(rng):
    assert binomial(rng, 0, 0.3) == 0
    assert binomial(rng, 17, 0.0) == 0
    assert binomial(rng, 17, 1.0) == 17
    with pytest.raises(ValueError):
        binomial(rng, -1, 0.5)
    with pytest.raises(OverflowError):
        binomial(rng, 2**63, 0.5)
    big = 9 * 10**18
    x = binomial(rng, big, 0.5)
    assert abs(x - big / 2) < 10 * math.sqrt(big)


def test_binomial_pmf(rng):
    x = rng.gen.binomial(10, 0.3, size=10**6)
    counts = dict(zip(*np.unique(x, return_counts=True)))
    exact = {j: math.exp(log_binomial_pmf(10, 0.3, j)) for j in range(11)}
    assert chi_square_uniformity(counts, exact) > 1e-3
    # the scalar wrapper draws from the same law
    xs = [binomial(rng, 10, 0.3) for _ in range(10**5)]
    counts = dict(zip(*np.unique(xs, return_counts=True)))
    assert chi_square_uniformity(counts, exact) > 1e-3


def test_binomial_complement_symmetry(rng):
    a = [57 - binomial(rng, 57, 0.3) for _ in range(10**5)]
    b = [binomial(rng, 57, 0.7) for _ in range(10**5)]
    ca = dict(zip(*np.unique(a, return_counts=True)))
    cb = dict(zip(*np.unique(b, return_counts=True)))
    assert two_sample_chi_square(ca, cb) > 1e-3


def test_poisson(rng):
    assert sum(poisson(rng, 1e-12) for _ in range(10**4)) == 0
    with pytest.raises(ValueError):
        poisson(rng, 0.0)
    x = rng.gen.poisson(4.0, size=10**6)
    assert abs(x.mean() - 4) < 0.006
    counts = dict(zip(*np.unique(x, return_counts=True)))
    exact = {j: math.exp(log_poisson_pmf(4.0, j)) for j in range(60)}
    assert chi_square_uniformity(counts, exact) > 1e-3
    xs = [poisson(rng, 4.0) for _ in range(10**5)]
    assert chi_square_uniformity(dict(zip(*np.unique(xs, return_counts=True))), exact) > 1e-3


def test_truncated_poisson_array(rng):
    x = truncated_poisson_array(rng, 0.7, 10**5)
    assert x.min() >= 1
    w = 0.7
    assert abs(x.mean() - w / (1 - math.exp(-w))) < 4 * x.std() / math.sqrt(x.size)


def test_reproducible():
    a, b = RandomSource(5), RandomSource(5)
    assert [binomial(a, 100, 0.4) for _ in range(50)] == [binomial(b, 100, 0.4) for _ in range(50)]
    assert RandomSource(6).uniform() != RandomSource(5).uniform()
    assert RandomSource(None).seed >= 0
