"""Log-space probabilities for the Poisson, truncated Poisson and binomial laws.

Point masses use Loader's saddle-point decomposition
``log pmf = -stirlerr(x) - bd0(x, mean) - log(2 pi x) / 2``, which keeps
full relative accuracy when both ``x`` and the mean are huge; the naive
``x log(lam) - lam - lgamma(x + 1)`` loses every digit once ``lam`` is
around ``1e15``. Tail masses come from the regularized incomplete gamma
function, with a direct log-space summation for tails that underflow.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np
from scipy import special as sc

LOG_2PI = math.log(2.0 * math.pi)
HALF_LOG_2PI = 0.5 * LOG_2PI
# below this the deep-tail conditionals are treated as degenerate
LOG_UNDERFLOW = -700.0
# where scipy's double result is too close to underflow to trust its log
_TINY = 1e-280

AT_LEAST = "at_least"
AT_MOST = "at_most"


def _stirlerr_small(n: int) -> float:
    return math.lgamma(n + 1.0) - (n + 0.5) * math.log(n) + n - HALF_LOG_2PI


_STIRLERR_TABLE = [0.0] + [_stirlerr_small(i) for i in range(1, 16)]


def stirlerr(n) -> float:
    """``log(n!) - log(sqrt(2 pi n) (n/e)^n)`` for integer ``n >= 0``."""
    if n <= 15:
        return _STIRLERR_TABLE[int(n)]
    x = float(n)
    nn = x * x
    if n > 500:
        return (1 / 12 - (1 / 360) / nn) / x
    if n > 80:
        return (1 / 12 - (1 / 360 - (1 / 1260) / nn) / nn) / x
    if n > 35:
        return (1 / 12 - (1 / 360 - (1 / 1260 - (1 / 1680) / nn) / nn) / nn) / x
    return (1 / 12 - (1 / 360 - (1 / 1260 - (1 / 1680 - (1 / 1188) / nn) / nn) / nn) / nn) / x


def bd0(x: float, mean: float, dev: float | None = None) -> float:
    """``x log(x / mean) + mean - x`` without cancellation.

    ``dev`` is ``x - mean`` when the caller knows it more precisely than the
    difference of the two rounded floats.
    """
    if dev is None:
        dev = x - mean
    if abs(dev) < 0.1 * (x + mean):
        v = dev / (x + mean)
        s = dev * v
        ej = 2.0 * x * v
        v2 = v * v
        for j in range(1, 1000):
            ej *= v2
            s1 = s + ej / (2 * j + 1)
            if s1 == s:
                return s1
            s = s1
        return s
    return x * math.log1p(dev / mean) - dev


def _as_float_and_dev(lam, j: int) -> tuple[float, float]:
    if isinstance(lam, Rational) and not isinstance(lam, int):
        return float(lam), float(j - lam)
    lam = float(lam)
    if j < 2**53:
        return lam, float(j) - lam
    return lam, float(j - Fraction(lam))


def _check_lambda(lam):
    if not lam > 0:
        raise ValueError(f"Poisson mean must be positive, got {lam!r}")


def log_poisson_pmf(lam, j: int) -> float:
    """``log Pr(Poiss(lam) = j)``.

    ``lam`` may be a float or an exact rational; rationals keep ``j - lam``
    exact, which matters when both are near ``1e18``.
    """
    _check_lambda(lam)
    if j < 0:
        return -math.inf
    if j == 0:
        return -float(lam)
    lamf, dev = _as_float_and_dev(lam, j)
    x = float(j)
    return -stirlerr(j) - bd0(x, lamf, dev) - 0.5 * (LOG_2PI + math.log(x))


def stirlerr_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    small = x <= 15
    out[small] = np.take(_STIRLERR_TABLE, x[small].astype(np.int64))
    xb = x[~small]
    nn = xb * xb
    out[~small] = (1 / 12 - (1 / 360 - (1 / 1260 - (1 / 1680 - (1 / 1188) / nn) / nn) / nn) / nn) / xb
    return out


def bd0_array(x: np.ndarray, mean, dev: np.ndarray | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    mean = np.broadcast_to(np.asarray(mean, dtype=np.float64), x.shape)
    dev = x - mean if dev is None else np.asarray(dev, dtype=np.float64)
    out = np.empty_like(x)
    ser = np.abs(dev) < 0.1 * (x + mean)
    xs, ds = x[ser], dev[ser]
    v = ds / (xs + mean[ser])
    v2 = v * v
    s = ds * v
    ej = 2.0 * xs * v
    for i in range(1, 25):
        ej = ej * v2
        s = s + ej / (2 * i + 1)
    out[ser] = s
    xd, dd, md = x[~ser], dev[~ser], mean[~ser]
    with np.errstate(divide="ignore", invalid="ignore"):
        out[~ser] = np.where(xd == 0, md, xd * np.log1p(dd / md) - dd)
    return out


def log_poisson_pmf_array(lam: float, j: np.ndarray) -> np.ndarray:
    """Vectorised :func:`log_poisson_pmf` for a float mean and ``j < 2**53``."""
    lam = float(lam)
    j = np.asarray(j, dtype=np.float64)
    out = np.empty_like(j)
    zero = j == 0
    out[zero] = -lam
    x = j[~zero]
    if x.size:
        out[~zero] = -stirlerr_array(x) - bd0_array(x, lam) - 0.5 * (LOG_2PI + np.log(x))
    return out


def log_binomial_pmf_array(N: np.ndarray, v: float | np.ndarray, j: np.ndarray) -> np.ndarray:
    """Vectorised :func:`log_binomial_pmf` for ``0 < v < 1`` and ``0 <= j <= N``."""
    N = np.asarray(N, dtype=np.float64)
    j = np.asarray(j, dtype=np.float64)
    v = np.broadcast_to(np.asarray(v, dtype=np.float64), N.shape)
    w = 1.0 - v
    out = np.empty_like(N)
    lo = j == 0
    hi = (j == N) & ~lo
    out[lo] = N[lo] * np.log1p(-v[lo])
    out[hi] = N[hi] * np.log(v[hi])
    mid = ~(lo | hi)
    Nm, jm, vm, wm = N[mid], j[mid], v[mid], w[mid]
    lc = (
        stirlerr_array(Nm)
        - stirlerr_array(jm)
        - stirlerr_array(Nm - jm)
        - bd0_array(jm, Nm * vm)
        - bd0_array(Nm - jm, Nm * wm)
    )
    lf = LOG_2PI + np.log(jm) + np.log1p(-jm / Nm)
    out[mid] = lc - 0.5 * lf
    return out


def _log_tail_sum_right(lam: float, j: int) -> float:
    # Pr(X >= j) = pmf(j) * sum_i prod_{m=1..i} lam / (j + m), for j > lam
    total = 0.0
    log_term = 0.0
    start = j
    while True:
        m = np.arange(start + 1, start + 4097, dtype=np.float64)
        steps = np.cumsum(np.log(lam / m)) + log_term
        total += float(np.exp(steps).sum())
        log_term = float(steps[-1])
        start += 4096
        if log_term < -40.0 + math.log(total + 1.0):
            break
    return log_poisson_pmf(lam, j) + math.log1p(total)


def _log_tail_sum_left(lam: float, j: int) -> float:
    # Pr(X <= j) = pmf(j) * sum_i prod_{m=0..i-1} (j - m) / lam, for j < lam
    total = 0.0
    log_term = 0.0
    top = j
    while top > 0:
        m = np.arange(top, max(top - 4096, 0), -1, dtype=np.float64)
        steps = np.cumsum(np.log(m / lam)) + log_term
        total += float(np.exp(steps).sum())
        log_term = float(steps[-1])
        top -= m.size
        if log_term < -40.0 + math.log(total + 1.0):
            break
    return log_poisson_pmf(lam, j) + math.log1p(total)


def poisson_tail(lam, j: int, side: str = AT_LEAST) -> float:
    """``log Pr(Poiss(lam) >= j)`` or ``log Pr(Poiss(lam) <= j)``.

    The upper tail is the regularized lower incomplete gamma ``P(j, lam)``,
    the lower tail is ``Q(j + 1, lam)``; each is evaluated directly (never as
    one minus the other).
    """
    _check_lambda(lam)
    lam = float(lam)
    if side == AT_LEAST:
        if j <= 0:
            return 0.0
        v = float(sc.gammainc(j, lam))
        if v > _TINY:
            return math.log(v)
        return _log_tail_sum_right(lam, j)
    if side == AT_MOST:
        if j < 0:
            return -math.inf
        v = float(sc.gammaincc(j + 1, lam))
        if v > _TINY:
            return math.log(v)
        return _log_tail_sum_left(lam, j)
    raise ValueError(f"side must be {AT_LEAST!r} or {AT_MOST!r}")


def _conditional(log_pmf: float, log_tail: float) -> float:
    if log_tail < LOG_UNDERFLOW:
        return 1.0
    return min(1.0, max(0.0, math.exp(log_pmf - log_tail)))


def poisson_cond_right(lam, j: int) -> float:
    """``Pr(Poiss(lam) = j | Poiss(lam) >= j)``."""
    return _conditional(log_poisson_pmf(lam, j), poisson_tail(lam, j, AT_LEAST))


def poisson_cond_left(lam, j: int) -> float:
    """``Pr(Poiss(lam) = j | Poiss(lam) <= j)``."""
    if j == 0:
        return 1.0
    return _conditional(log_poisson_pmf(lam, j), poisson_tail(lam, j, AT_MOST))


def cond_right_array(lam: float, j: np.ndarray) -> np.ndarray:
    """Vectorised right conditionals; degenerate deep-tail entries are 1."""
    j = np.asarray(j, dtype=np.float64)
    tail = sc.gammainc(np.maximum(j, 1.0), lam)
    tail = np.where(j <= 0, 1.0, tail)
    with np.errstate(divide="ignore"):
        logt = np.log(tail)
    r = np.exp(log_poisson_pmf_array(lam, j) - logt)
    r = np.where(logt < LOG_UNDERFLOW, 1.0, r)
    return np.clip(r, 0.0, 1.0)


def cond_left_array(lam: float, j: np.ndarray) -> np.ndarray:
    j = np.asarray(j, dtype=np.float64)
    tail = sc.gammaincc(j + 1.0, lam)
    with np.errstate(divide="ignore"):
        logt = np.log(tail)
    r = np.exp(log_poisson_pmf_array(lam, j) - logt)
    r = np.where((logt < LOG_UNDERFLOW) | (j <= 0), 1.0, r)
    return np.clip(r, 0.0, 1.0)


def log_binomial_pmf(N: int, v: float, j: int) -> float:
    """``log Pr(Bin(N, v) = j)``."""
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"probability out of range: {v!r}")
    if j < 0 or j > N:
        raise ValueError(f"j={j} outside [0, {N}]")
    if v == 0.0:
        return 0.0 if j == 0 else -math.inf
    if v == 1.0:
        return 0.0 if j == N else -math.inf
    if j == 0:
        return N * math.log1p(-v)
    if j == N:
        return N * math.log(v)
    w = 1.0 - v
    lc = (
        stirlerr(N)
        - stirlerr(j)
        - stirlerr(N - j)
        - bd0(float(j), N * v, j - N * v)
        - bd0(float(N - j), N * w, (N - j) - N * w)
    )
    lf = LOG_2PI + math.log(j) + math.log1p(-j / N)
    return lc - 0.5 * lf


def log_expm1(x: float) -> float:
    """``log(e^x - 1)`` for ``x > 0``."""
    if x > 40.0:
        return x + math.log1p(-math.exp(-x))
    return math.log(math.expm1(x))


def log_truncated_poisson_pmf(omega: float, j: int) -> float:
    """``log Pr(Poiss_{>=1}(omega) = j) = log(omega^j / (j! (e^omega - 1)))``."""
    _check_lambda(omega)
    if j < 1:
        raise ValueError("truncated Poisson is supported on j >= 1")
    # omega^j e^-omega / j! divided by 1 - e^-omega
    return log_poisson_pmf(omega, j) - math.log(-math.expm1(-omega))


def binomial_variance_factor(x: float) -> float:
    """``x / (1 + x)^2``: variance of a two-point split with odds ``x``."""
    return x / (1.0 + x) ** 2


def log_mapping_bound(lam_r) -> float:
    """Mode mass ``log Pr(Poiss(lam_r) = floor(lam_r))`` dominating every
    ``Pr(Poiss(lam_r) = m)``."""
    return log_poisson_pmf(lam_r, math.floor(lam_r))


def g13(n: int, k: int) -> int:
    """``ceil((3k - n) / 2)``: forced lower bound on the number of 1s and 2s."""
    return (3 * k - n + 1) // 2


def log_surjection13_bound(n: int, k: int, omega: float) -> float:
    G = g13(n, k)
    if G <= 0:
        raise ValueError(f"pair-targeting bound needs 3k > n, got n={n}, k={k}")
    h = binomial_variance_factor(omega / 2.0)
    return 1.0 / 12.0 - 0.5 * math.log(math.pi * G * h)


def block_count(n: int, k: int) -> int:
    """Even block horizon ``D``: ``floor(2n/k)`` rounded up to even."""
    d = (2 * n) // k
    return d + (d & 1)


def general_block_target(n: int, k: int) -> float:
    D = block_count(n, k)
    return 2.0 * ((D + 1) * k - n) / (D * D)


def general_block_thresholds(n: int, k: int, omega: float) -> tuple[np.ndarray, float]:
    """Per-block targets ``G_j`` (``j = 1, 3, ..., D - 1``) and the log bound ``q``.

    Writing ``T = (D+1)k - n``, any size-vector with sum ``n`` satisfies
    ``T = sum_i (D + 1 - X_i) <= sum_j (D + 1 - j) M_{j,j+1}``, so whenever
    ``sum_j (D + 1 - j) G_j <= T`` some block has ``M_{j,j+1} >= G_j``. Taking
    ``G_j`` proportional to ``1 / h_j``, with ``h_j`` the split variance of
    block ``j``, makes the mode bound ``e^{1/12} / sqrt(pi G_j h_j)`` the same
    constant for every block.
    """
    D = block_count(n, k)
    T = (D + 1) * k - n
    if T <= 0:
        raise ValueError(f"block target must be positive, got T={T}")
    j = np.arange(1, D, 2, dtype=np.float64)
    x = omega / (j + 1.0)
    h = x / (1.0 + x) ** 2
    c = T / float(np.sum((D + 1 - j) / h))
    return c / h, 1.0 / 12.0 - 0.5 * math.log(math.pi * c)


def log_surjection_general_bound(n: int, k: int, omega: float) -> float:
    """Log of the uniform bound ``q`` of the block round."""
    return general_block_thresholds(n, k, omega)[1]


def early_rejection_bound_q(context: str, *, n: int | None = None, k: int | None = None,
                            omega: float | None = None, lam_r=None) -> float:
    """Log of the uniform bound ``q`` used to up-scale an acceptance test.

    ``context`` is ``"mapping"`` (needs ``lam_r``), ``"surjection13"`` or
    ``"surjectionD"`` (need ``n``, ``k``, ``omega``).
    """
    if context == "mapping":
        return log_mapping_bound(lam_r)
    if context == "surjection13":
        return log_surjection13_bound(n, k, omega)
    if context == "surjectionD":
        return log_surjection_general_bound(n, k, omega)
    raise ValueError(f"unknown context {context!r}")
