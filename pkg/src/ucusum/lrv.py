"""Long-run variance of the projected kernel and studentization.

The estimator is a Bartlett lag-window sum of the empirical autocovariances
of the projection values, multiplied by 4::

    sigma2 = 4 * sum_{|k| < n} W(|k| / b) * (1/n) sum_i h1(X_i) h1(X_{i+|k|})

with ``W(x) = (1 - |x|) 1{|x| <= 1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConfigurationError, DegenerateVarianceError
from .kernels import ProjectionVector
from .uproc import DiffProcess

__all__ = [
    "CUBE_ROOT",
    "LrvConfig",
    "bartlett",
    "long_run_variance",
    "studentize",
]

CUBE_ROOT = "n^(1/3)"
VARIANTS = ("appendix_d", "intro_gmd")


def bartlett(x):
    x = np.abs(np.asarray(x, dtype=float))
    return np.where(x <= 1.0, 1.0 - x, 0.0)


@dataclass(frozen=True)
class LrvConfig:
    """Lag window, bandwidth and estimator variant.

    ``bandwidth`` is a positive number or the rule ``"n^(1/3)"``; the rule
    resolves to the real value ``n ** (1/3)`` without rounding.
    ``variant="intro_gmd"`` selects the lag-free estimator
    ``(2/n) sum_i h1(X_i)^2`` instead of the lag-window estimator.
    """

    bandwidth: Union[float, str] = CUBE_ROOT
    window: str = "bartlett"
    variant: str = "appendix_d"

    def __post_init__(self):
        if self.window != "bartlett":
            raise ConfigurationError(f"unsupported lag window {self.window!r}")
        if self.variant not in VARIANTS:
            raise ConfigurationError(f"unknown variant {self.variant!r}")
        b = self.bandwidth
        if isinstance(b, str):
            if b not in (CUBE_ROOT, "auto"):
                raise ConfigurationError(f"unknown bandwidth rule {b!r}")
            object.__setattr__(self, "bandwidth", CUBE_ROOT)
        elif not np.isfinite(b) or b <= 0:
            raise ConfigurationError(f"bandwidth must be positive, got {b!r}")

    def resolve_bandwidth(self, n: int) -> float:
        if self.bandwidth == CUBE_ROOT:
            b = float(n) ** (1.0 / 3.0)
        else:
            b = float(self.bandwidth)
        if b > n - 1:
            raise ConfigurationError(f"bandwidth {b} exceeds n - 1 = {n - 1}")
        return b


def long_run_variance(proj: ProjectionVector, cfg: LrvConfig = LrvConfig()) -> float:
    """Estimate the long-run variance from projection values.

    Bartlett weights keep the estimate non-negative. It is zero for constant
    data, which raises :class:`DegenerateVarianceError`; so does any other
    non-positive result of rounding.
    """
    h = np.asarray(proj.values, dtype=float)
    n = len(h)
    if n < 2:
        raise ConfigurationError("need at least two projection values")
    if cfg.variant == "intro_gmd":
        value = 2.0 * np.dot(h, h) / n
    else:
        b = cfg.resolve_bandwidth(n)
        value = np.dot(h, h) / n
        for lag in range(1, n):
            w = 1.0 - lag / b
            if w <= 0.0:
                break
            value += 2.0 * w * np.dot(h[:-lag], h[lag:]) / n
        value *= 4.0
    if not value > 0.0:
        raise DegenerateVarianceError(value)
    return float(value)


def studentize(diff: DiffProcess, sigma2: float):
    """Studentized statistics ``max_k |D(k)| / sqrt(n * sigma2)`` for both methods.

    The maximum runs over ``2 <= k <= n - 2``, where both segments hold at
    least two observations, so the two methods share one index range.
    """
    if not sigma2 > 0.0:
        raise DegenerateVarianceError(sigma2)
    scale = np.sqrt(diff.n) * np.sqrt(sigma2)
    inner = slice(1, diff.n - 2)
    t1 = float(np.max(np.abs(diff.dF[inner])) / scale)
    t2 = float(np.max(np.abs(diff.dL[inner])) / scale)
    return t1, t2
