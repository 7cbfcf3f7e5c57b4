"""Profiles of uniform random mappings ``[n] -> [k]``.

The preimage sizes of a uniform mapping are ``k`` iid Poisson(n/k)
variables conditioned on summing to ``n``. :func:`random_map_profile`
samples the profile of the first half of them with a mode-centred
multinomial sweep, accepts the partial sum with probability scaled up by
the Poisson mode mass, and recurses on the second half.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .profile import Profile, SamplerStats
from .special import (
    AT_LEAST,
    cond_left_array,
    cond_right_array,
    log_poisson_pmf,
    poisson_tail,
)
from .variates import RandomSource, bernoulli_log, binomial, poisson_array

BOUND_TOL = 1e-9
_CHUNK = 64


class BoundViolation(AssertionError):
    """An acceptance probability exceeded its dominating bound."""


@dataclass(frozen=True)
class RoundOutcome:
    profile: Profile
    sum: int
    window: int


class PoissonSweep:
    """Lazily extended tables of the sweep conditionals for one mean.

    ``right[i]`` is ``Pr(X = m + i | X >= m + i)`` and ``left[i]`` is
    ``Pr(X = m - 1 - i | X <= m - 1 - i)`` where ``m = floor(lam)``.
    """

    def __init__(self, lam: float):
        self.lam = lam
        self.mode = math.floor(lam)
        self.p_upper = math.exp(poisson_tail(lam, self.mode, AT_LEAST)) if self.mode > 0 else 1.0
        self._right: list[float] = []
        self._left: list[float] = []

    def right(self, i: int) -> float:
        tab = self._right
        if i >= len(tab):
            start = self.mode + len(tab)
            stop = self.mode + max(i + 1, 2 * len(tab), _CHUNK)
            tab.extend(cond_right_array(self.lam, np.arange(start, stop)).tolist())
        return tab[i]

    def left(self, i: int) -> float:
        tab = self._left
        if i >= len(tab):
            top = self.mode - 1 - len(tab)
            stop = max(self.mode - 1 - max(i + 1, 2 * len(tab), _CHUNK), -1)
            tab.extend(cond_left_array(self.lam, np.arange(top, stop, -1)).tolist())
        return tab[i]


@lru_cache(maxsize=512)
def poisson_sweep(lam: float) -> PoissonSweep:
    return PoissonSweep(lam)


def _run_length(sizes) -> list[tuple[int, int]]:
    return sorted(Counter(sizes).items())


def small_k_profile(rng: RandomSource, n: int, k: int) -> Profile:
    """Multinomial method: ``k - 1`` conditional binomials, then sort."""
    if k < 1:
        raise ValueError("k must be positive")
    sizes = []
    rest = n
    for i in range(k - 1):
        c = binomial(rng, rest, 1.0 / (k - i))
        sizes.append(c)
        rest -= c
    sizes.append(rest)
    return Profile(tuple(_run_length(sizes)))


def _sweep(rng: RandomSource, k: int, lam: float, out: list):
    """Mode-centred multinomial sweep over ``k`` iid Poisson(lam) values.

    Appends ``(size, count)`` pairs to ``out`` (right side ascending, then
    left side descending) and returns ``(sum, binomial draws)``.
    """
    tab = poisson_sweep(lam)
    m = tab.mode
    R = binomial(rng, k, tab.p_upper)
    L = k - R
    total = 0
    draws = 1
    i = 0
    while R > 0:
        c = binomial(rng, R, tab.right(i))
        draws += 1
        if c:
            out.append((m + i, c))
            total += (m + i) * c
            R -= c
        i += 1
    i = 0
    while L > 0:
        c = binomial(rng, L, tab.left(i))
        draws += 1
        if c:
            j = m - 1 - i
            out.append((j, c))
            total += j * c
            L -= c
        i += 1
    return total, draws


def simulate_profile(rng: RandomSource, k: int, lam: float) -> RoundOutcome:
    """Profile of ``k`` iid Poisson(lam) variables (no conditioning)."""
    if k < 1 or not lam > 0:
        raise ValueError("need k >= 1 and lam > 0")
    pairs: list = []
    total, draws = _sweep(rng, k, float(lam), pairs)
    pairs.sort()
    return RoundOutcome(Profile(tuple(pairs), anchor=math.floor(lam)), total, draws)


def naive_boltzmann_profile(rng: RandomSource, n: int, k: int, max_rounds: int | None = None):
    """Draw ``k`` iid Poisson(n/k) until they sum to ``n``.

    Slow (about ``sqrt(2 pi n)`` rounds); kept as an independent baseline.
    """
    stats = SamplerStats()
    before = rng.poisson_draws
    lam = n / k
    while True:
        stats.rounds += 1
        x = poisson_array(rng, lam, k) if n else np.zeros(k, dtype=np.int64)
        if int(x.sum()) == n:
            stats.accepted += 1
            stats.poisson_draws = rng.poisson_draws - before
            return Profile(tuple(_run_length(x.tolist()))), stats
        if max_rounds is not None and stats.rounds >= max_rounds:
            raise RuntimeError(f"no acceptance after {max_rounds} rounds")


def _icbrt(n: int) -> int:
    r = int(round(n ** (1.0 / 3.0))) if n < 2**60 else int(round(math.exp(math.log(n) / 3)))
    while r * r * r > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


def base_case_threshold(n: int) -> int:
    """Largest ``k`` handled by the plain multinomial method."""
    return max(8, _icbrt(n))


class MapLevel:
    """One recursion level: constants shared by all of its rounds."""

    def __init__(self, n: int, k: int):
        self.n = n
        self.k = k
        self.lam = n / k
        self.k_left = k // 2
        self.k_right = k - self.k_left
        self.lam_right = Fraction(self.lam) * self.k_right
        self.log_q = log_poisson_pmf(self.lam_right, math.floor(self.lam_right))

    def round(self, rng: RandomSource, pairs: list):
        """One sampling round; returns ``(accepted, sum, window)``.

        On acceptance the left-half pairs have been appended to ``pairs``.
        """
        scratch: list = []
        s, window = _sweep(rng, self.k_left, self.lam, scratch)
        if s > self.n:
            return False, s, window
        log_p = log_poisson_pmf(self.lam_right, self.n - s)
        ratio = log_p - self.log_q
        if ratio > BOUND_TOL:
            raise BoundViolation(f"p > q at n={self.n}, k={self.k}, s={s}")
        if bernoulli_log(rng, min(ratio, 0.0)):
            pairs.extend(scratch)
            return True, s, window
        return False, s, window


def random_map_profile(rng: RandomSource, n: int, k: int, *, base_k: int | None = None):
    """Exact uniform random-mapping profile and its cost counters.

    ``base_k`` overrides the size below which the multinomial method is used
    directly (``base_k=1`` forces the recursion all the way down).
    """
    if k < 1 or n < 0:
        raise ValueError(f"need n >= 0 and k >= 1, got n={n}, k={k}")
    stats = SamplerStats()
    before = rng.counters()
    counts: Counter = Counter()
    anchor = n // k
    while True:
        if n == 0:
            counts[0] += k
            break
        limit = base_case_threshold(n) if base_k is None else base_k
        if k <= limit:
            for s, c in small_k_profile(rng, n, k):
                counts[s] += c
            break
        level = MapLevel(n, k)
        stats.recursion_depth += 1
        pairs: list = []
        while True:
            stats.rounds += 1
            ok, s, window = level.round(rng, pairs)
            stats.total_window += window
            stats.max_window = max(stats.max_window, window)
            if ok:
                stats.accepted += 1
                break
        for size, c in pairs:
            counts[size] += c
        n -= s
        k = level.k_right
    after = rng.counters()
    stats.binomial_draws, stats.poisson_draws, stats.bernoulli_draws = (
        a - b for a, b in zip(after, before)
    )
    return Profile.from_counts(counts, anchor), stats
