"""Uniformity suite: every sampler path against the exact oracle tables.

Used by ``profile-sampler verify``; also importable from tests.
"""

from __future__ import annotations

import time
from fractions import Fraction

from . import batch
from .oracle import (
    ENUM_MAX_K,
    ENUM_MAX_N,
    MAPPING,
    SURJECTION,
    chi_square_uniformity,
    exact_profile_distribution,
    exact_weights,
    stirling2,
    tv_distance,
)
from .surjections import BOLTZMANN, COUPON
from .variates import RandomSource

P_THRESHOLD = 1e-3
MIN_SAMPLES = 10_000


def _paths(n: int, k: int):
    yield MAPPING, None
    if n > k:
        yield SURJECTION, COUPON
        yield SURJECTION, BOLTZMANN
    elif n == k:
        yield SURJECTION, None


def oracle_invariants(n: int, k: int) -> list[str]:
    """Exact-table checks: masses sum to 1 and both surjection counts agree."""
    failures = []
    for kind in (MAPPING, SURJECTION):
        if kind == SURJECTION and n < k:
            continue
        dist = exact_profile_distribution(n, k, kind)
        if sum(dist.values(), Fraction(0)) != 1:
            failures.append(f"{kind} ({n},{k}): masses do not sum to 1")
    _, total = exact_weights(n, k, MAPPING)
    if total != k**n:
        failures.append(f"mapping ({n},{k}): total {total} != k^n")
    if n >= k:
        _, total = exact_weights(n, k, SURJECTION)
        fact = 1
        for i in range(2, k + 1):
            fact *= i
        if total != fact * stirling2(n, k):
            failures.append(f"surjection ({n},{k}): total {total} != k! S(n,k)")
    return failures


def run_suite(max_n: int = 8, max_k: int = 4, samples: int = 100_000, seed: int = 0) -> dict:
    """Run the suite on every ``1 <= k <= max_k``, ``k <= n <= max_n``.

    Returns a JSON-ready report with one entry per checked path and an
    overall ``passed`` flag (all p-values above the threshold and all
    oracle invariants hold).
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"insufficient samples: {samples} < {MIN_SAMPLES}")
    max_n = min(max_n, ENUM_MAX_N)
    max_k = min(max_k, ENUM_MAX_K)
    start = time.perf_counter()
    rng = RandomSource(seed)
    checks = []
    invariant_failures = []
    for k in range(1, max_k + 1):
        for n in range(k, max_n + 1):
            invariant_failures.extend(oracle_invariants(n, k))
            for kind, method in _paths(n, k):
                exact = exact_profile_distribution(n, k, kind)
                if len(exact) < 2:
                    continue
                if kind == MAPPING:
                    tally = batch.map_profile_tally(rng, n, k, samples)
                else:
                    tally = batch.surjection_profile_tally(rng, n, k, samples, method=method or "auto")
                p = chi_square_uniformity(tally, exact)
                checks.append({
                    "n": n, "k": k, "kind": kind, "method": method,
                    "p_value": p, "tv": tv_distance(tally, exact),
                    "passed": p > P_THRESHOLD,
                })
    passed = not invariant_failures and all(c["passed"] for c in checks)
    return {
        "passed": passed,
        "samples": samples,
        "seed": seed,
        "threshold": P_THRESHOLD,
        "checks": checks,
        "invariant_failures": invariant_failures,
        "seconds": round(time.perf_counter() - start, 3),
    }
