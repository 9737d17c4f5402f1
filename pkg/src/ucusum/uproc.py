"""Prefix/suffix U-statistics and the two weighted difference processes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _fast
from .kernels import Kernel, as_series

__all__ = ["DiffProcess", "prefix_u", "suffix_u", "diff_processes"]


@dataclass(frozen=True)
class DiffProcess:
    """Trajectories of the first-vs-full and first-vs-last processes.

    ``dF[k - 1]`` and ``dL[k - 1]`` hold the values at split point ``k``
    for ``k = 1..n``. Split points where a segment would have fewer than two
    observations are set to 0 and marked ``False`` in ``valid_f`` /
    ``valid_l`` (``k = 1`` for dF; ``k in {1, n-1, n}`` for dL).
    """

    n: int
    dF: np.ndarray
    dL: np.ndarray
    valid_f: np.ndarray
    valid_l: np.ndarray

    @property
    def k(self) -> np.ndarray:
        return np.arange(1, self.n + 1)

    def scaled(self, by: str = "n"):
        """Return ``(dF, dL)`` divided by ``n`` or by ``sqrt(n)``."""
        div = {"n": self.n, "sqrt_n": np.sqrt(self.n)}[by]
        return self.dF / div, self.dL / div


def _prefix(kernel: Kernel, x: np.ndarray) -> np.ndarray:
    if kernel._prefix_u is not None:
        return kernel._prefix_u(x)
    n = len(x)
    rows = np.zeros(n)
    for k in range(1, n):
        rows[k] = np.sum(kernel.pairwise(x[:k], x[k]))
    s = _fast.compensated_cumsum(rows)
    k = np.arange(1, n + 1, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        u = s / (k * (k - 1.0) / 2.0)
    u[0] = np.nan
    return u


def prefix_u(kernel: Kernel, series) -> np.ndarray:
    """All prefix U-statistics.

    Entry ``k - 1`` holds ``U_{1:k}`` for ``k = 2..n``; entry 0 is NaN.
    """
    return _prefix(kernel, as_series(series, kernel))


def suffix_u(kernel: Kernel, series) -> np.ndarray:
    """All suffix U-statistics: entry ``k`` holds ``U_{(k+1):n}``, k = 0..n-2."""
    x = as_series(series, kernel)
    return _prefix(kernel, x[::-1].copy())[::-1][:-1].copy()


def diff_processes(kernel: Kernel, series) -> DiffProcess:
    """Compute ``D^F_n(k) = k (U_{1:k} - U_{1:n})`` and
    ``D^L_n(k) = k (n - k) / n * (U_{1:k} - U_{(k+1):n})``.
    """
    x = as_series(series, kernel, min_n=4)
    n = len(x)
    pre = _prefix(kernel, x)
    suf = _prefix(kernel, x[::-1].copy())[::-1]  # suf[k] = U_{(k+1):n}
    k = np.arange(1, n + 1, dtype=float)

    valid_f = np.ones(n, dtype=bool)
    valid_f[0] = False
    valid_l = valid_f.copy()
    valid_l[n - 2:] = False

    dF = np.zeros(n)
    dF[1:] = k[1:] * (pre[1:] - pre[-1])
    dF[-1] = 0.0

    dL = np.zeros(n)
    kk = k[1 : n - 2]
    dL[1 : n - 2] = kk * (n - kk) / n * (pre[1 : n - 2] - suf[2 : n - 1])
    return DiffProcess(n, dF, dL, valid_f, valid_l)
