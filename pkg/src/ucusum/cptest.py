"""End-to-end first-vs-full / first-vs-last change-point tests."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from typing import Optional, Tuple

import numpy as np

from .errors import ConfigurationError, SampleTooSmallError
from .kernels import Kernel, as_series, projection
from .lrv import LrvConfig, long_run_variance, studentize
from .nulldist import p_value
from .uproc import DiffProcess, diff_processes

__all__ = [
    "FIRST_VS_FULL",
    "FIRST_VS_LAST",
    "METHODS",
    "TestReport",
    "estimate_location",
    "run_test",
    "run_both",
]

FIRST_VS_FULL = "first_vs_full"
FIRST_VS_LAST = "first_vs_last"
METHODS = (FIRST_VS_FULL, FIRST_VS_LAST)
_ALIASES = {"fvf": FIRST_VS_FULL, "fvl": FIRST_VS_LAST}

MIN_N = 8


def _method(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in METHODS:
        raise ConfigurationError(f"unknown method {name!r}")
    return name


@dataclass(frozen=True)
class TestReport:
    """Outcome of one studentized test on one series.

    Serializes to a flat JSON object; ``bandwidth`` is the resolved numeric
    bandwidth (``None`` for the lag-free variant) and ``bandwidth_rule`` the
    configured value.
    """

    __test__ = False  # keep pytest from collecting this class

    method: str
    statistic: float
    p_value: float
    tau_hat: float
    k_hat: int
    sigma2: float
    n: int
    kernel: str
    window: str
    bandwidth: Optional[float]
    bandwidth_rule: str
    variant: str
    no_signal: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "TestReport":
        names = {f.name for f in fields(cls)}
        missing = names - set(d) - {"no_signal"}
        if missing:
            raise ConfigurationError(f"missing report fields: {sorted(missing)}")
        return cls(**{k: d[k] for k in names if k in d})

    @classmethod
    def from_json(cls, text: str) -> "TestReport":
        return cls.from_dict(json.loads(text))


def estimate_location(diff: DiffProcess, method: str) -> Tuple[int, float, bool]:
    """Argmax of ``|D(k)|`` over ``2 <= k <= n - 2``, smallest ``k`` on ties.

    Both segments hold at least two observations on that range, for either
    method. Returns ``(k_hat, tau_hat, no_signal)``; ``no_signal`` is set
    when the process vanishes there, in which case ``k_hat = 2`` carries no
    information.
    """
    method = _method(method)
    d = diff.dF if method == FIRST_VS_FULL else diff.dL
    inner = (diff.k >= 2) & (diff.k <= diff.n - 2)
    a = np.where(inner, np.abs(d), -1.0)
    idx = int(np.argmax(a))  # first occurrence
    no_signal = bool(a[idx] == 0.0)
    k_hat = idx + 1
    return k_hat, k_hat / diff.n, no_signal


def _report(method, diff, sigma2, stat, kernel, cfg, n):
    k_hat, tau_hat, flat = estimate_location(diff, method)
    return TestReport(
        method=method,
        statistic=stat,
        p_value=p_value(stat),
        tau_hat=tau_hat,
        k_hat=k_hat,
        sigma2=sigma2,
        n=n,
        kernel=kernel.name,
        window=cfg.window,
        bandwidth=cfg.resolve_bandwidth(n) if cfg.variant == "appendix_d" else None,
        bandwidth_rule=str(cfg.bandwidth),
        variant=cfg.variant,
        no_signal=flat,
    )


def _prepare(series, kernel):
    x = as_series(series, kernel)
    if len(x) < MIN_N:
        raise SampleTooSmallError(f"a test needs at least {MIN_N} observations, got {len(x)}")
    return x


def run_both(series, kernel: Kernel, cfg: LrvConfig = LrvConfig()):
    """Run both methods, sharing the projection and variance estimate."""
    x = _prepare(series, kernel)
    diff = diff_processes(kernel, x)
    sigma2 = long_run_variance(projection(kernel, x), cfg)
    t1, t2 = studentize(diff, sigma2)
    n = len(x)
    return (
        _report(FIRST_VS_FULL, diff, sigma2, t1, kernel, cfg, n),
        _report(FIRST_VS_LAST, diff, sigma2, t2, kernel, cfg, n),
    )


def run_test(series, kernel: Kernel, cfg: LrvConfig = LrvConfig(), method: str = FIRST_VS_FULL):
    method = _method(method)
    fvf, fvl = run_both(series, kernel, cfg)
    return fvf if method == FIRST_VS_FULL else fvl
