"""Vectorised samplers for many independent profiles at once.

These run the same rounds as :mod:`.mappings` and :mod:`.surjections`, but
each numpy call advances a whole batch of independent rounds, which is
what makes million-sample uniformity checks affordable. Results are
returned as tallies ``{pairs: count}`` rather than individual profiles.
Parameter ranges where vectorising does not pay (recursive mapping
levels) fall back to the scalar samplers.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np

from .mappings import BOUND_TOL, BoundViolation, base_case_threshold, random_map_profile
from .special import log_binomial_pmf_array
from .surjections import (
    AUTO,
    BOLTZMANN,
    COUPON,
    is_coupon_regime,
    random_surjection_profile,
    surjection_tables,
)
from .variates import RandomSource

_BATCH = 1 << 16


def _tally_rows(rows: np.ndarray, sizes: np.ndarray | None = None) -> Counter:
    """Tally rows of per-size counts; column ``c`` counts size ``sizes[c]``."""
    out: Counter = Counter()
    if rows.shape[0] == 0:
        return out
    uniq, freq = np.unique(rows, axis=0, return_counts=True)
    if sizes is None:
        sizes = np.arange(rows.shape[1])
    for row, f in zip(uniq.tolist(), freq.tolist()):
        out[tuple((int(s), c) for s, c in zip(sizes.tolist(), row) if c)] += f
    return out


def _size_vectors_to_count_rows(vectors: np.ndarray) -> np.ndarray:
    width = int(vectors.max()) + 1 if vectors.size else 1
    rows = np.zeros((vectors.shape[0], width), dtype=np.int64)
    for c in range(vectors.shape[1]):
        np.add.at(rows, (np.arange(vectors.shape[0]), vectors[:, c]), 1)
    return rows


def _multinomial_rows(rng: RandomSource, n: int, k: int, size: int) -> np.ndarray:
    rng.binomial_draws += size * (k - 1)
    return rng.gen.multinomial(n, [1.0 / k] * k, size=size)


def map_profile_tally(rng: RandomSource, n: int, k: int, samples: int) -> Counter:
    """Tally of ``samples`` uniform random-mapping profiles."""
    if k > base_case_threshold(n) and n > 0:
        out: Counter = Counter()
        for _ in range(samples):
            out[random_map_profile(rng, n, k)[0].pairs] += 1
        return out
    out = Counter()
    left = samples
    while left:
        m = min(left, _BATCH)
        out.update(_tally_rows(_size_vectors_to_count_rows(_multinomial_rows(rng, n, k, m))))
        left -= m
    return out


def _coupon_tally(rng: RandomSource, n: int, k: int, samples: int) -> tuple[Counter, int]:
    if k > base_case_threshold(n):
        out: Counter = Counter()
        rounds = 0
        for _ in range(samples):
            p, st = random_surjection_profile(rng, n, k, method=COUPON)
            out[p.pairs] += 1
            rounds += st.rounds
        return out, rounds
    out = Counter()
    rounds = 0
    left = samples
    while left:
        rows = _multinomial_rows(rng, n, k, _BATCH)
        good = rows[rows.min(axis=1) > 0][:left]
        # rounds consumed up to and including the last kept row
        if good.shape[0] == left:
            rounds += int(np.flatnonzero(rows.min(axis=1) > 0)[left - 1]) + 1
        else:
            rounds += _BATCH
        out.update(_tally_rows(_size_vectors_to_count_rows(good)))
        left -= good.shape[0]
    return out, rounds


def _rounds_13(rng: RandomSource, n: int, k: int, B: int):
    t = surjection_tables(n, k)
    gen = rng.gen
    R = gen.binomial(k, t.p_high, size=B)
    M12 = k - R
    alive = M12 >= t.G13
    R = np.where(alive, R, 0)
    N = np.full(B, n, dtype=np.int64)
    cols = []
    j = 3
    draws = B
    while R.any():
        c = gen.binomial(R, t.right(j))
        draws += B
        cols.append(c)
        R = R - c
        N -= j * c
        j += 1
    m1 = 2 * M12 - N
    m2 = N - M12
    ok = alive & (m1 >= 0) & (m2 >= 0)
    log_ratio = np.full(B, -np.inf)
    log_ratio[ok] = log_binomial_pmf_array(M12[ok], t.v12, m1[ok]) - t.log_q13
    if (log_ratio > BOUND_TOL).any():
        raise BoundViolation(f"p > q in pair-targeting round at n={n}, k={k}")
    u = gen.random(B)
    with np.errstate(divide="ignore"):
        accept = ok & (np.log(u) < log_ratio)
    rows = np.column_stack([m1, m2] + cols)[accept]
    sizes = np.arange(1, 3 + len(cols))
    rng.binomial_draws += draws
    rng.bernoulli_draws += int(ok.sum())
    return rows, sizes, accept


def _rounds_general(rng: RandomSource, n: int, k: int, B: int):
    t = surjection_tables(n, k)
    gen = rng.gen
    rest = np.full(B, k, dtype=np.int64)
    nb = len(t.block_cond)
    blocks = np.zeros((B, nb), dtype=np.int64)
    draws = 0
    for b, cond in enumerate(t.block_cond):
        c = gen.binomial(rest, cond)
        draws += B
        blocks[:, b] = c
        rest -= c
    qual = blocks >= np.asarray(t.block_target)
    has = qual.any(axis=1)
    chosen = np.argmax(qual, axis=1)
    rest = np.where(has, rest, 0)
    N = np.full(B, n, dtype=np.int64)
    tail = []
    j = t._tail_from
    while rest.any():
        c = gen.binomial(rest, t.right(j))
        draws += B
        tail.append(c)
        rest = rest - c
        N -= j * c
        j += 1
    split = np.asarray(t.block_split)
    lo = gen.binomial(blocks, split)
    draws += blocks.size
    odd = np.arange(1, 2 * nb, 2)
    mass = lo * odd + (blocks - lo) * (odd + 1)
    rows_idx = np.arange(B)
    mass[rows_idx, chosen] = 0
    N -= mass.sum(axis=1)
    i = 2 * chosen + 1
    k_hat = blocks[rows_idx, chosen]
    m_lo = (i + 1) * k_hat - N
    m_hi = N - i * k_hat
    ok = has & (m_lo >= 0) & (m_hi >= 0)
    log_ratio = np.full(B, -np.inf)
    log_ratio[ok] = log_binomial_pmf_array(k_hat[ok], split[chosen[ok]], m_lo[ok]) - t.log_qD
    if (log_ratio > BOUND_TOL).any():
        raise BoundViolation(f"p > q in block round at n={n}, k={k}")
    u = gen.random(B)
    with np.errstate(divide="ignore"):
        accept = ok & (np.log(u) < log_ratio)
    width = 2 * nb + len(tail)
    rows = np.zeros((B, width), dtype=np.int64)
    rows[:, 0:2 * nb:2] = lo
    rows[:, 1:2 * nb:2] = blocks - lo
    rows[rows_idx, 2 * chosen] = np.maximum(m_lo, 0)
    rows[rows_idx, 2 * chosen + 1] = np.maximum(m_hi, 0)
    if tail:
        rows[:, 2 * nb:] = np.column_stack(tail)
    sizes = np.arange(1, width + 1)
    rng.binomial_draws += draws
    rng.bernoulli_draws += int(ok.sum())
    return rows[accept], sizes, accept


def boltzmann_tally(rng: RandomSource, n: int, k: int, samples: int,
                    round_kind: str | None = None) -> tuple[Counter, int]:
    """Tally of ``samples`` accepted Boltzmann rounds and the rounds used."""
    if round_kind is None:
        round_kind = "13" if 3 * k - n >= 1 else "general"
    step = _rounds_13 if round_kind == "13" else _rounds_general
    out: Counter = Counter()
    rounds = 0
    left = samples
    batch = 1024
    while left:
        rows, sizes, accept = step(rng, n, k, batch)
        idx = np.flatnonzero(accept)
        if idx.size >= left:
            rows = rows[:left]
            rounds += int(idx[left - 1]) + 1
        else:
            rounds += batch
        out.update(_tally_rows(rows, sizes))
        left -= rows.shape[0]
        rate = max(idx.size / batch, 1e-3)
        batch = int(min(_BATCH, max(1024, 1.2 * left / rate)))
    return out, rounds


def surjection_profile_tally(rng: RandomSource, n: int, k: int, samples: int,
                             method: str = AUTO, round_kind: str | None = None) -> Counter:
    """Tally of ``samples`` uniform random-surjection profiles."""
    if not (n >= k >= 1):
        raise ValueError(f"surjection needs n >= k >= 1, got n={n}, k={k}")
    if n == k:
        return Counter({((1, k),): samples})
    if method == AUTO:
        method = COUPON if is_coupon_regime(n, k) else BOLTZMANN
    if method == COUPON:
        return _coupon_tally(rng, n, k, samples)[0]
    if method == BOLTZMANN:
        return boltzmann_tally(rng, n, k, samples, round_kind)[0]
    raise ValueError(f"unknown method {method!r}")


def surjection_tally(rng: RandomSource, n: int, k: int, samples: int) -> Counter:
    """Tally of ``samples`` full uniform surjections (as image tuples).

    Profile, then a uniformly shuffled size-vector, then a uniformly
    shuffled image array; each shuffle is an independent Fisher-Yates pass
    per sample. Row order is irrelevant to the tally, so rows sharing a
    profile are laid out together.
    """
    prof = surjection_profile_tally(rng, n, k, samples)
    blocks = [np.tile(np.repeat([s for s, _ in pairs], [c for _, c in pairs]), (cnt, 1))
              for pairs, cnt in prof.items()]
    sv = rng.gen.permuted(np.vstack(blocks), axis=1)
    labels = np.tile(np.arange(1, k + 1), samples)
    images = np.repeat(labels, sv.ravel()).reshape(samples, n)
    images = rng.gen.permuted(images, axis=1)
    out: Counter = Counter()
    uniq, freq = np.unique(images, axis=0, return_counts=True)
    for row, f in zip(uniq.tolist(), freq.tolist()):
        out[tuple(row)] += f
    return out
