"""Seeded random source and the primitive draws every sampler is built from.

Binomial and Poisson variates come from numpy's ``Generator``: BTPE
rejection (inversion when ``N min(p, 1-p)`` is small) and PTRS transformed
rejection (inversion below mean 10). Both run in expected O(1) time for
parameters up to the int64 range.
"""

from __future__ import annotations

import math

import numpy as np

INT64_MAX = 2**63 - 1
PROB_TOL = 1e-9


class RandomSource:
    """A PCG64 stream plus counters of the primitive draws taken from it.

    Not safe for concurrent use; give each worker its own seed.
    """

    def __init__(self, seed: int | None = None):
        if seed is None:
            seed = int(np.random.SeedSequence().entropy % 2**64)
        self.seed = int(seed)
        self.gen = np.random.Generator(np.random.PCG64(self.seed))
        self.binomial_draws = 0
        self.poisson_draws = 0
        self.bernoulli_draws = 0

    def __repr__(self):
        return f"RandomSource(seed={self.seed})"

    def counters(self) -> tuple[int, int, int]:
        return self.binomial_draws, self.poisson_draws, self.bernoulli_draws

    def uniform(self) -> float:
        return self.gen.random()

    def integers(self, high: int) -> int:
        """Uniform integer in ``[0, high)``."""
        return int(self.gen.integers(high))

    def shuffle(self, arr: np.ndarray) -> None:
        self.gen.shuffle(arr)


def _check_prob(p: float) -> float:
    if not -PROB_TOL <= p <= 1.0 + PROB_TOL:
        raise ValueError(f"probability out of range: {p!r}")
    return min(1.0, max(0.0, p))


def bernoulli(rng: RandomSource, p: float) -> bool:
    p = _check_prob(p)
    rng.bernoulli_draws += 1
    return rng.gen.random() < p


def bernoulli_log(rng: RandomSource, log_p: float) -> bool:
    """Bernoulli with success probability ``exp(log_p)``; ``log_p`` slightly
    above zero (rounding) is clamped to 1."""
    if log_p > math.log1p(PROB_TOL):
        raise ValueError(f"log-probability above 0: {log_p!r}")
    rng.bernoulli_draws += 1
    if log_p >= 0.0:
        return True
    u = rng.gen.random()
    return u == 0.0 or math.log(u) < log_p


def binomial(rng: RandomSource, N: int, p: float) -> int:
    rng.binomial_draws += 1
    if not 0.0 < p < 1.0:
        p = _check_prob(p)
    if N <= 0 or p == 0.0:
        if N < 0:
            raise ValueError(f"negative trial count {N}")
        return 0
    if p == 1.0:
        return N
    if N > INT64_MAX:
        raise OverflowError("binomial trial count exceeds the int64 range")
    return int(rng.gen.binomial(N, p))


def poisson(rng: RandomSource, lam: float) -> int:
    if not lam > 0:
        raise ValueError(f"Poisson mean must be positive, got {lam!r}")
    rng.poisson_draws += 1
    return int(rng.gen.poisson(lam))


def poisson_array(rng: RandomSource, lam: float, size: int) -> np.ndarray:
    """``size`` iid Poisson draws (counted individually)."""
    if lam < 0:
        raise ValueError(f"Poisson mean must be nonnegative, got {lam!r}")
    rng.poisson_draws += size
    return rng.gen.poisson(lam, size=size)


def truncated_poisson_array(rng: RandomSource, omega: float, size: int) -> np.ndarray:
    """``size`` iid draws of Poisson(omega) conditioned to be nonzero, by
    redrawing the zeros."""
    out = poisson_array(rng, omega, size)
    zeros = np.flatnonzero(out == 0)
    while zeros.size:
        out[zeros] = poisson_array(rng, omega, zeros.size)
        zeros = zeros[out[zeros] == 0]
    return out
