"""Saddle-point parameter for the surjection Boltzmann sampler.

``omega(n, k)`` is the unique positive root of ``k * f(omega) = n`` with
``f(w) = w e^w / (e^w - 1)``, i.e. the truncated Poisson mean that makes
``k`` iid draws sum to ``n`` on average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .special import block_count, g13, general_block_target


def excess_mean(w: float) -> float:
    """``f(w) - 1 = (w - 1 + e^-w) / (1 - e^-w)``, accurate as ``w -> 0``."""
    if w < 1e-2:
        # w/2 + w^2/12 - w^4/720 + w^6/30240
        w2 = w * w
        return w * (0.5 + w * (1 / 12 - w2 * (1 / 720 - w2 / 30240)))
    em = -math.expm1(-w)
    return (w - em) / em


def _excess_mean_prime(w: float) -> float:
    if w < 1e-2:
        w2 = w * w
        return 0.5 + w / 6 - w2 * w / 180 + w2 * w2 * w / 5040
    em = -math.expm1(-w)
    e = math.exp(-w)
    return (em - w * e) / (em * em)


@dataclass(frozen=True)
class OmegaParams:
    n: int
    k: int
    omega: float

    @property
    def delta(self) -> int:
        return self.n - self.k

    @property
    def D(self) -> int:
        return block_count(self.n, self.k)

    @property
    def G13(self) -> int:
        return g13(self.n, self.k)

    @property
    def GD(self) -> float:
        return general_block_target(self.n, self.k)


def solve_omega(n: int, k: int) -> OmegaParams:
    """Root of the saddle-point equation, to about 1e-15 relative.

    Bisection on the guaranteed bracket ``[n/k - 1, n/k]`` followed by a few
    Newton steps on ``f(w) - 1 = (n - k)/k``.
    """
    if not (n > k >= 1):
        raise ValueError(f"saddle point needs n > k >= 1, got n={n}, k={k}")
    target = (n - k) / k
    rho = n / k
    if target > 745.0:
        # e^-w underflows: f(w) == w to double precision
        return OmegaParams(n, k, rho)
    # f(w) - 1 lies between w/2 and w, so the root sits in [target, 2 target]
    lo = target
    hi = min(rho, 2.0 * target)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if excess_mean(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-3 * hi:
            break
    w = 0.5 * (lo + hi)
    for _ in range(4):
        step = (excess_mean(w) - target) / _excess_mean_prime(w)
        w_new = min(max(w - step, lo), hi)
        if w_new == w:
            break
        w = w_new
    return OmegaParams(n, k, w)


def derived_constants(params: OmegaParams) -> tuple[int, int, float]:
    """``(D, G13, GD)``."""
    return params.D, params.G13, params.GD


def check_bounds(params: OmegaParams, rel_tol: float = 1e-9) -> list[str]:
    """Names of the violated saddle-point inequalities (empty when all hold).

    Everything is compared per unit of ``k``, with slack ``rel_tol`` times the
    magnitude of the operands.
    """
    w = params.omega
    d = params.delta / params.k
    rho = params.n / params.k
    failed = []

    def le(a, b, name, *scale):
        if a > b + rel_tol * max([abs(a), abs(b), *scale]):
            failed.append(name)

    le(rho - 1.0, w, "n/k - 1 <= omega")
    le(w, rho, "omega <= n/k")
    le(d, w, "delta <= k omega")
    le(w, 2.0 * d, "k omega <= 2 delta")
    le(0.0, 2.0 * d - w, "0 <= 2 delta - k omega", w)
    le(2.0 * d - w, w * w / 6.0, "2 delta - k omega <= k omega^2 / 6", w)
    return failed
