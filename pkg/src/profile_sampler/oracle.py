"""Exact reference distributions and the goodness-of-fit machinery.

Everything here is independent of the samplers: profile laws come from
enumerating compositions with exact rational weights, and acceptance
probabilities from exact Stirling numbers.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Mapping as MappingT

import numpy as np
from scipy import stats

from .saddle import solve_omega

STIRLING_MAX = 500
ENUM_MAX_N = 14
ENUM_MAX_K = 6
MIN_EXPECTED = 5.0

MAPPING = "mapping"
SURJECTION = "surjection"


class OracleRangeError(ValueError):
    pass


@lru_cache(maxsize=None)
def _stirling_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling_row(n - 1)
    row = [0] * (n + 1)
    for k in range(1, n + 1):
        a = k * prev[k] if k < len(prev) else 0
        row[k] = a + prev[k - 1]
    return tuple(row)


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind, exact."""
    if not 0 <= n <= STIRLING_MAX:
        raise OracleRangeError(f"n must lie in [0, {STIRLING_MAX}], got {n}")
    if k < 0 or k > n:
        return 0
    # build rows bottom-up so the cache never recurses deeply
    for m in range(0, n + 1, 50):
        _stirling_row(m)
    return _stirling_row(n)[k]


def _compositions(n: int, k: int, low: int):
    """All tuples of ``k`` integers ``>= low`` summing to ``n``."""
    if k == 1:
        if n >= low:
            yield (n,)
        return
    for first in range(low, n - low * (k - 1) + 1):
        for rest in _compositions(n - first, k - 1, low):
            yield (first,) + rest


def _profile_key(sizes) -> tuple:
    return tuple(sorted(Counter(sizes).items()))


def exact_weights(n: int, k: int, kind: str = MAPPING) -> tuple[dict, int]:
    """Unnormalised profile weights (number of mappings per profile) and
    their total."""
    if not (0 <= n <= ENUM_MAX_N and 1 <= k <= ENUM_MAX_K):
        raise OracleRangeError(f"enumeration capped at n <= {ENUM_MAX_N}, k <= {ENUM_MAX_K}")
    if kind not in (MAPPING, SURJECTION):
        raise ValueError(f"unknown kind {kind!r}")
    low = 1 if kind == SURJECTION else 0
    fact_n = math.factorial(n)
    weights: Counter = Counter()
    for comp in _compositions(n, k, low):
        w = fact_n
        for s in comp:
            w //= math.factorial(s)
        weights[_profile_key(comp)] += w
    return dict(weights), sum(weights.values())


def exact_profile_distribution(n: int, k: int, kind: str = MAPPING) -> dict[tuple, Fraction]:
    """Exact law of the profile of a uniform mapping or surjection
    ``[n] -> [k]``, keyed by profile pairs."""
    weights, total = exact_weights(n, k, kind)
    if total == 0:
        raise OracleRangeError(f"no surjection [{n}] -> [{k}]")
    return {key: Fraction(w, total) for key, w in sorted(weights.items())}


def log_exact_acceptance_probability(n: int, k: int) -> float:
    if not (1 <= k <= n <= STIRLING_MAX):
        raise OracleRangeError(f"need 1 <= k <= n <= {STIRLING_MAX}, got n={n}, k={k}")
    if n == k:
        return 0.0
    w = solve_omega(n, k).omega
    log_s = math.log(stirling2(n, k))
    log_em1 = w + math.log(-math.expm1(-w))
    return (n * math.log(w) - k * log_em1 + math.lgamma(k + 1)
            - math.lgamma(n + 1) + log_s)


def exact_acceptance_probability(n: int, k: int) -> float:
    """Probability that ``k`` iid truncated Poisson(omega) variables, omega
    at the saddle point, sum to exactly ``n``."""
    return math.exp(log_exact_acceptance_probability(n, k))


def _align(empirical: MappingT, exact: MappingT):
    keys = sorted(set(empirical) | set(exact))
    obs = np.array([float(empirical.get(x, 0)) for x in keys])
    prob = np.array([float(exact.get(x, 0)) for x in keys])
    return keys, obs, prob


def chi_square_statistic(empirical: MappingT, exact: MappingT) -> tuple[float, int, float]:
    """Pearson statistic, degrees of freedom and p-value.

    Cells with expected count below 5 are pooled (smallest first) into a
    single cell. Observations outside the exact support give ``p = 0``.
    """
    _, obs, prob = _align(empirical, exact)
    total = obs.sum()
    if total <= 0:
        raise ValueError("no observations")
    if (obs[prob == 0] > 0).any():
        return math.inf, 0, 0.0
    keep = prob > 0
    obs, prob = obs[keep], prob[keep] / prob[keep].sum()
    if len(prob) < 2:
        raise ValueError("chi-square test needs at least two outcome classes")
    expected = total * prob
    order = np.argsort(expected)
    expected, obs = expected[order], obs[order]
    # pool every cell below the threshold, topping up with the next
    # smallest cells until the pooled cell reaches it
    cut = int((expected < MIN_EXPECTED).sum())
    if cut:
        cum = np.cumsum(expected)
        while cut < len(expected) and cum[cut - 1] < MIN_EXPECTED:
            cut += 1
        expected = np.concatenate([[expected[:cut].sum()], expected[cut:]])
        obs = np.concatenate([[obs[:cut].sum()], obs[cut:]])
    if len(expected) < 2:
        raise ValueError("chi-square test needs at least two outcome classes after pooling")
    stat = float(((obs - expected) ** 2 / expected).sum())
    dof = len(expected) - 1
    return stat, dof, float(stats.chi2.sf(stat, dof))


def chi_square_uniformity(empirical: MappingT, exact: MappingT) -> float:
    """p-value of the Pearson test of ``empirical`` counts against ``exact``."""
    return chi_square_statistic(empirical, exact)[2]


def two_sample_chi_square(a: MappingT, b: MappingT) -> float:
    """p-value of the chi-square homogeneity test between two count tables."""
    keys = sorted(set(a) | set(b))
    table = np.array([[a.get(x, 0) for x in keys], [b.get(x, 0) for x in keys]], dtype=float)
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] < 2:
        return 1.0
    return float(stats.chi2_contingency(table, correction=False)[1])


def tv_distance(empirical: MappingT, exact: MappingT) -> float:
    """Half the L1 distance between the two tables after normalising each."""
    _, a, b = _align(empirical, exact)
    if a.sum() > 0:
        a = a / a.sum()
    if b.sum() > 0:
        b = b / b.sum()
    return float(0.5 * np.abs(a - b).sum())


def distribution_to_json(dist: MappingT) -> str:
    """Exact table as JSON: a list of ``{"pairs", "num", "den"}`` records."""
    rows = []
    for key, pr in sorted(dist.items()):
        pr = Fraction(pr)
        rows.append({"pairs": [list(x) for x in key], "num": pr.numerator, "den": pr.denominator})
    return json.dumps(rows, separators=(",", ":"))


def distribution_from_json(text: str) -> dict[tuple, Fraction]:
    return {tuple(tuple(x) for x in r["pairs"]): Fraction(r["num"], r["den"])
            for r in json.loads(text)}
