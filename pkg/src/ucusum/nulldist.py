"""Kolmogorov distribution: the law of sup |B(t)| for a Brownian bridge B.

Two series are used::

    K(x) = 1 - 2 sum_{k>=1} (-1)^(k+1) exp(-2 k^2 x^2)                 (x >= 0.2)
    K(x) = sqrt(2 pi) / x * sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2))     (x <  0.2)

The alternating one converges fast for moderate and large x, the theta
series for small x.
"""

import math

from scipy.optimize import brentq

from .errors import DomainError

__all__ = ["kolmogorov_cdf", "kolmogorov_sf", "kolmogorov_quantile", "p_value"]

SWITCHOVER = 0.2
_TOL = 1e-12


def _alternating_tail(x: float) -> float:
    # 2 sum (-1)^(k+1) exp(-2 k^2 x^2) = 1 - K(x)
    total = 0.0
    k = 1
    while True:
        term = math.exp(-2.0 * k * k * x * x)
        total += term if k % 2 else -term
        if term < _TOL:
            break
        k += 1
    return 2.0 * total


def _theta_cdf(x: float) -> float:
    total = 0.0
    k = 1
    c = math.pi * math.pi / (8.0 * x * x)
    while True:
        term = math.exp(-(2 * k - 1) ** 2 * c)
        total += term
        if term < _TOL:
            break
        k += 1
    return math.sqrt(2.0 * math.pi) / x * total


def kolmogorov_cdf(x: float) -> float:
    x = float(x)
    if x <= 0.0:
        return 0.0
    if x < SWITCHOVER:
        return _theta_cdf(x)
    return 1.0 - _alternating_tail(x)


def kolmogorov_sf(x: float) -> float:
    """``1 - K(x)``, summed directly to keep precision in the far tail."""
    x = float(x)
    if x <= 0.0:
        return 1.0
    if x < SWITCHOVER:
        return 1.0 - _theta_cdf(x)
    return min(1.0, max(0.0, _alternating_tail(x)))


def kolmogorov_quantile(p: float) -> float:
    """Inverse of :func:`kolmogorov_cdf` on ``(0, 1)``."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {p}")
    lo, hi = 0.01, 5.0
    while kolmogorov_cdf(lo) > p:
        lo /= 2.0
    while kolmogorov_cdf(hi) < p:
        hi *= 2.0
    return brentq(lambda x: kolmogorov_cdf(x) - p, lo, hi, xtol=1e-14, rtol=1e-15)


def p_value(t: float) -> float:
    """Asymptotic p-value of a studentized statistic."""
    return min(1.0, max(0.0, kolmogorov_sf(t)))
