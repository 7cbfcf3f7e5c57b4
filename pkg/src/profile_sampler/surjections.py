"""Profiles of uniform random surjections ``[n] -> [k]``.

Three exact routes, chosen for speed only:

* ``n == k``: the profile is forced to ``[(1, k)]``.
* ``k <= n / ln n`` (coupon-collector regime): sample mapping profiles
  until one has no empty preimage.
* otherwise: Boltzmann rounds over ``k`` iid truncated Poisson(omega)
  variables with ``omega`` at the saddle point. One pair of adjacent
  sizes ``(j, j+1)`` is left unresolved; its split is the only free
  quantity once everything else is drawn, and its acceptance probability
  is up-scaled by a uniform bound. In the general round every pair
  block has its own count target, chosen so that this bound is the same
  for all blocks.
"""

from __future__ import annotations

import math
from collections import Counter
from functools import lru_cache

import numpy as np

from .mappings import BOUND_TOL, BoundViolation, base_case_threshold, poisson_sweep, random_map_profile
from .profile import Profile, SamplerStats
from .saddle import OmegaParams, solve_omega
from .special import (
    cond_right_array,
    log_binomial_pmf,
    log_poisson_pmf,
    log_surjection13_bound,
    general_block_thresholds,
    poisson_tail,
    AT_LEAST,
)
from .variates import RandomSource, bernoulli_log, binomial, truncated_poisson_array

DEFAULT_ROUND_BUDGET = 10**9

AUTO = "auto"
COUPON = "coupon"
BOLTZMANN = "boltzmann"


class RoundBudgetExceeded(RuntimeError):
    pass


def is_coupon_regime(n: int, k: int) -> bool:
    return n >= 2 and k <= n / math.log(n)


class _SurjectionTables:
    """Per-(n, k) constants of the Boltzmann rounds."""

    def __init__(self, n: int, k: int):
        self.params = solve_omega(n, k)
        w = self.params.omega
        self.omega = w
        self.sweep = poisson_sweep(w)
        self._right: dict[int, float] = {}
        self.log_trunc = math.log(-math.expm1(-w))
        if 3 * k - n >= 1:
            self.G13 = self.params.G13
            self.p_high = math.exp(poisson_tail(w, 3, AT_LEAST) - self.log_trunc)
            self.v12 = 1.0 / (1.0 + w / 2.0)
            self.log_q13 = log_surjection13_bound(n, k, w)
        D = self.params.D
        self.D = D
        self.GD = self.params.GD
        thresholds, self.log_qD = general_block_thresholds(n, k, w)
        self.block_target = thresholds.tolist()
        # conditional block probabilities Pr(X in {i, i+1} | X >= i), i odd
        starts = np.arange(1, D, 2, dtype=np.float64)
        pmf_i = np.exp([log_poisson_pmf(w, int(i)) for i in starts])
        pmf_i1 = np.exp([log_poisson_pmf(w, int(i) + 1) for i in starts])
        tail = np.array([math.exp(poisson_tail(w, int(i), AT_LEAST)) for i in starts])
        self.block_cond = np.clip((pmf_i + pmf_i1) / tail, 0.0, 1.0).tolist()
        self.block_split = [1.0 / (1.0 + w / (i + 1)) for i in range(1, D, 2)]
        self._tail_from = D + 1

    def right(self, j: int) -> float:
        """``Pr(X = j | X >= j)`` for ``j >= 2`` (truncation is irrelevant there)."""
        r = self._right.get(j)
        if r is None:
            js = np.arange(j, j + 64)
            for jj, v in zip(js.tolist(), cond_right_array(self.omega, js).tolist()):
                self._right[jj] = v
            r = self._right[j]
        return r


@lru_cache(maxsize=256)
def surjection_tables(n: int, k: int) -> _SurjectionTables:
    return _SurjectionTables(n, k)


def surjection_round_13(rng: RandomSource, n: int, k: int, params: OmegaParams | None = None):
    """One round of the pair-targeting sampler for ``3k > n``.

    Returns the profile pairs on acceptance, ``None`` on rejection.
    """
    t = surjection_tables(n, k)
    if params is not None and params.omega != t.omega:
        raise ValueError("params do not match (n, k)")
    if 3 * k - n < 1:
        raise ValueError(f"pair-targeting round needs 3k > n, got n={n}, k={k}")
    R = binomial(rng, k, t.p_high)
    M12 = k - R
    if M12 < t.G13:
        return None
    pairs = []
    N = n
    j = 3
    while R > 0:
        # every remaining value is >= j; past this point m2 < 0 is certain
        if N - j * R < M12:
            return None
        c = binomial(rng, R, t.right(j))
        if c:
            pairs.append((j, c))
            R -= c
            N -= j * c
        j += 1
    m1 = 2 * M12 - N
    m2 = N - M12
    if m1 < 0 or m2 < 0:
        return None
    ratio = log_binomial_pmf(M12, t.v12, m1) - t.log_q13
    if ratio > BOUND_TOL:
        raise BoundViolation(f"p > q in pair-targeting round at n={n}, k={k}, M12={M12}")
    if not bernoulli_log(rng, min(ratio, 0.0)):
        return None
    head = [(s, c) for s, c in ((1, m1), (2, m2)) if c]
    return head + pairs


def surjection_round_general(rng: RandomSource, n: int, k: int, params: OmegaParams | None = None):
    """One round of the block sampler, valid for every ``n > k``.

    Block totals ``M_{i,i+1}`` for odd ``i < D`` and singleton counts above
    ``D`` are drawn by the multinomial method; the first block reaching its own
    target is left unresolved and all others are split by one
    binomial each.
    """
    t = surjection_tables(n, k)
    if params is not None and params.omega != t.omega:
        raise ValueError("params do not match (n, k)")
    rest = k
    blocks = []
    for cond in t.block_cond:
        if rest == 0:
            break
        c = binomial(rng, rest, cond)
        blocks.append(c)
        rest -= c
    chosen = -1
    targets = t.block_target
    for b, c in enumerate(blocks):
        if c >= targets[b]:
            chosen = b
            break
    if chosen < 0:
        return None
    pairs = []
    N = n
    j = t._tail_from
    while rest > 0:
        c = binomial(rng, rest, t.right(j))
        if c:
            pairs.append((j, c))
            rest -= c
            N -= j * c
        j += 1
    for b, c in enumerate(blocks):
        if b == chosen or c == 0:
            continue
        i = 2 * b + 1
        lo = binomial(rng, c, t.block_split[b])
        if lo:
            pairs.append((i, lo))
        if c - lo:
            pairs.append((i + 1, c - lo))
        N -= i * lo + (i + 1) * (c - lo)
    i = 2 * chosen + 1
    k_hat = blocks[chosen]
    m_lo = (i + 1) * k_hat - N
    m_hi = N - i * k_hat
    if m_lo < 0 or m_hi < 0:
        return None
    ratio = log_binomial_pmf(k_hat, t.block_split[chosen], m_lo) - t.log_qD
    if ratio > BOUND_TOL:
        raise BoundViolation(f"p > q in block round at n={n}, k={k}, j={i}, k_hat={k_hat}")
    if not bernoulli_log(rng, min(ratio, 0.0)):
        return None
    if m_lo:
        pairs.append((i, m_lo))
    if m_hi:
        pairs.append((i + 1, m_hi))
    return pairs


def _coupon_small(rng: RandomSource, n: int, k: int, stats: SamplerStats) -> Profile:
    # batched multinomial rounds; the first all-positive row is kept
    gen = rng.gen
    p_ok = max(1.0 - k * math.exp(-n / k), 0.05)
    batch = min(4096, max(4, int(2.0 / p_ok)))
    pvals = [1.0 / k] * k
    while True:
        rows = gen.multinomial(n, pvals, size=batch)
        good = np.flatnonzero(rows.min(axis=1) > 0)
        used = batch if good.size == 0 else int(good[0]) + 1
        stats.rounds += used
        rng.binomial_draws += used * (k - 1)
        if good.size:
            stats.accepted += 1
            return Profile(tuple(sorted(Counter(rows[good[0]].tolist()).items())))


def _coupon(rng: RandomSource, n: int, k: int, stats: SamplerStats, budget: int) -> Profile:
    if k <= base_case_threshold(n):
        return _coupon_small(rng, n, k, stats)
    while stats.rounds < budget:
        p, s = random_map_profile(rng, n, k)
        stats.rounds += 1
        stats.recursion_depth = max(stats.recursion_depth, s.recursion_depth)
        stats.max_window = max(stats.max_window, s.max_window)
        stats.total_window += s.total_window
        if p.pairs[0][0] > 0:
            stats.accepted += 1
            return p
    raise RoundBudgetExceeded(f"no surjection after {budget} mapping draws")


def _boltzmann(rng, n, k, stats, budget, round_kind):
    if round_kind is None:
        round_kind = "13" if 3 * k - n >= 1 else "general"
    step = surjection_round_13 if round_kind == "13" else surjection_round_general
    while stats.rounds < budget:
        stats.rounds += 1
        pairs = step(rng, n, k)
        if pairs is not None:
            stats.accepted += 1
            return Profile(tuple(sorted(pairs)))
    raise RoundBudgetExceeded(f"no acceptance after {budget} Boltzmann rounds")


def random_surjection_profile(rng: RandomSource, n: int, k: int, *, method: str = AUTO,
                              round_kind: str | None = None,
                              budget: int = DEFAULT_ROUND_BUDGET):
    """Exact uniform random-surjection profile and its cost counters.

    ``method`` forces ``"coupon"`` or ``"boltzmann"``; ``round_kind`` forces
    the Boltzmann round (``"13"`` or ``"general"``).
    """
    if not (n >= k >= 1):
        raise ValueError(f"surjection needs n >= k >= 1, got n={n}, k={k}")
    stats = SamplerStats()
    before = rng.counters()
    if n == k:
        profile = Profile(((1, k),))
    else:
        if method == AUTO:
            method = COUPON if is_coupon_regime(n, k) else BOLTZMANN
        if method == COUPON:
            profile = _coupon(rng, n, k, stats, budget)
        elif method == BOLTZMANN:
            profile = _boltzmann(rng, n, k, stats, budget, round_kind)
        else:
            raise ValueError(f"unknown method {method!r}")
    after = rng.counters()
    stats.binomial_draws, stats.poisson_draws, stats.bernoulli_draws = (
        a - b for a, b in zip(after, before)
    )
    return profile, stats


def naive_boltzmann_surjection_profile(rng: RandomSource, n: int, k: int,
                                       max_rounds: int | None = None):
    """Draw ``k`` iid truncated Poisson(omega) until they sum to ``n``."""
    if n == k:
        return Profile(((1, k),)), SamplerStats(rounds=1, accepted=1)
    w = solve_omega(n, k).omega
    stats = SamplerStats()
    before = rng.poisson_draws
    while True:
        stats.rounds += 1
        x = truncated_poisson_array(rng, w, k)
        if int(x.sum()) == n:
            stats.accepted += 1
            stats.poisson_draws = rng.poisson_draws - before
            return Profile(tuple(sorted(Counter(x.tolist()).items()))), stats
        if max_rounds is not None and stats.rounds >= max_rounds:
            raise RoundBudgetExceeded(f"no acceptance after {max_rounds} rounds")


def naive_surjection_acceptance(rng: RandomSource, n: int, k: int, rounds: int) -> float:
    """Fraction of ``rounds`` naive Boltzmann rounds whose sum is exactly ``n``."""
    w = solve_omega(n, k).omega
    hits = 0
    done = 0
    while done < rounds:
        m = min(rounds - done, 10000)
        x = truncated_poisson_array(rng, w, m * k).reshape(m, k)
        hits += int((x.sum(axis=1) == n).sum())
        done += m
    return hits / rounds
