"""Symmetric order-2 kernels and the empirical first-order projection.

A kernel ``h`` maps two observations to a real number with
``h(x, y) == h(y, x)``. Univariate observations are scalars; bivariate ones
are pairs and a bivariate series is an ``(n, 2)`` array.

The built-in kernels carry compiled or closed-form paths for the row sums
``sum_j h(X_i, X_j)`` and the prefix U-statistics; custom kernels fall back
to vectorised O(n^2) evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _fast
from .errors import ConfigurationError, DataError, SampleTooSmallError

__all__ = [
    "Kernel",
    "ProjectionVector",
    "BUILTIN_KERNELS",
    "builtin_kernel",
    "custom_kernel",
    "as_series",
    "row_sums",
    "projection",
]


@dataclass(frozen=True, eq=False)
class Kernel:
    """A symmetric kernel.

    ``func`` is evaluated elementwise on broadcastable arrays: scalars or
    ``(m,)`` arrays for univariate kernels, ``(2,)`` or ``(m, 2)`` arrays
    for bivariate ones.
    """

    name: str
    bivariate: bool
    func: Callable[[np.ndarray, np.ndarray], np.ndarray] = field(repr=False)
    fast_prefix_capable: bool = False
    _prefix_u: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, repr=False
    )
    _row_sums: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, repr=False
    )

    @property
    def arity_kind(self) -> str:
        return "bivariate" if self.bivariate else "univariate"

    def __call__(self, x, y) -> float:
        return float(self.func(np.asarray(x, dtype=float), np.asarray(y, dtype=float)))

    def pairwise(self, x, y) -> np.ndarray:
        """Elementwise ``h(x[i], y[i])`` for two equally long samples."""
        return np.asarray(
            self.func(np.asarray(x, dtype=float), np.asarray(y, dtype=float)),
            dtype=float,
        )


@dataclass(frozen=True)
class ProjectionVector:
    """Empirical projection values and the full-sample U-statistic."""

    values: np.ndarray
    u_full: float

    def __len__(self) -> int:
        return len(self.values)


# -- elementwise kernel functions -------------------------------------------


def _gmd(x, y):
    return np.abs(x - y)


def _variance(x, y):
    return 0.5 * (x - y) ** 2


def _covariance(a, b):
    return 0.5 * (b[..., 0] - a[..., 0]) * (b[..., 1] - a[..., 1])


def _kendall(a, b):
    return np.sign(b[..., 0] - a[..., 0]) * np.sign(b[..., 1] - a[..., 1])


def _binom2(n):
    k = np.arange(1, n + 1, dtype=float)
    return k * (k - 1.0) / 2.0


def _from_pairsums(s):
    with np.errstate(invalid="ignore", divide="ignore"):
        u = s / _binom2(len(s))
    u[0] = np.nan
    return u


# -- fast paths --------------------------------------------------------------


def _gmd_prefix_u(x):
    # differences are translation invariant; centring on x[0] makes ties exact
    d = x - x[0]
    ranks = np.empty(len(d), dtype=np.int64)
    ranks[np.argsort(d, kind="stable")] = np.arange(len(d))
    return _from_pairsums(_fast.gmd_prefix_pairsums(d, ranks))


def _gmd_row_sums(x):
    # sorted gaps g_m = x_(m+1) - x_(m); the i-th order statistic collects
    # g_m (m+1) from gaps below it and g_m (n-1-m) from gaps above it
    n = len(x)
    order = np.argsort(x, kind="stable")
    g = np.diff(x[order])
    m = np.arange(n - 1)
    below = np.concatenate(([0.0], np.cumsum(g * (m + 1))))
    above = np.concatenate((np.cumsum((g * (n - 1 - m))[::-1])[::-1], [0.0]))
    out = np.empty(n)
    out[order] = below + above
    return out


def _variance_prefix_u(x):
    return _fast.welford_prefix_variance(x - x[0])


def _variance_row_sums(x):
    x = x - x[0]
    d = x - x.mean()
    return 0.5 * len(x) * (d * d + np.mean(d * d))


def _covariance_prefix_u(z):
    return _fast.welford_prefix_covariance(
        np.ascontiguousarray(z[:, 0] - z[0, 0]), np.ascontiguousarray(z[:, 1] - z[0, 1])
    )


def _covariance_row_sums(z):
    zx, zy = z[:, 0] - z[0, 0], z[:, 1] - z[0, 1]
    dx = zx - zx.mean()
    dy = zy - zy.mean()
    return 0.5 * len(z) * (dx * dy + np.mean(dx * dy))


def _kendall_prefix_u(z):
    s = _fast.kendall_prefix_pairsums(
        np.ascontiguousarray(z[:, 0]), np.ascontiguousarray(z[:, 1])
    )
    return _from_pairsums(s.astype(float))


def _kendall_row_sums(z):
    return _fast.kendall_row_sums(
        np.ascontiguousarray(z[:, 0]), np.ascontiguousarray(z[:, 1])
    ).astype(float)


BUILTIN_KERNELS = {
    "gmd": Kernel("gmd", False, _gmd, True, _gmd_prefix_u, _gmd_row_sums),
    "variance": Kernel(
        "variance", False, _variance, True, _variance_prefix_u, _variance_row_sums
    ),
    "covariance": Kernel(
        "covariance", True, _covariance, True, _covariance_prefix_u, _covariance_row_sums
    ),
    "kendall": Kernel("kendall", True, _kendall, False, _kendall_prefix_u, _kendall_row_sums),
}


def builtin_kernel(name: str) -> Kernel:
    """Look up one of ``gmd``, ``variance``, ``covariance``, ``kendall``."""
    try:
        return BUILTIN_KERNELS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown kernel {name!r}; expected one of {sorted(BUILTIN_KERNELS)}"
        ) from None


def custom_kernel(
    name: str,
    func: Callable,
    *,
    bivariate: bool = False,
    vectorized: bool = False,
    check_seed: int = 0,
) -> Kernel:
    """Wrap a user function as a :class:`Kernel`.

    Symmetry is the caller's responsibility; it is spot-checked on 16 random
    pairs and a :class:`ConfigurationError` is raised when it fails.
    With ``vectorized=False`` the function is called once per pair.
    """
    if vectorized:
        vfunc = func
    else:

        def vfunc(a, b):
            a = np.asarray(a, dtype=float)
            b = np.asarray(b, dtype=float)
            lead = 1 if bivariate else 0
            shape = np.broadcast_shapes(a.shape, b.shape)
            a = np.broadcast_to(a, shape)
            b = np.broadcast_to(b, shape)
            if len(shape) == lead:
                return float(func(a, b))
            out_shape = shape[: len(shape) - lead]
            flat_a = a.reshape((-1,) + shape[len(out_shape):])
            flat_b = b.reshape((-1,) + shape[len(out_shape):])
            vals = np.fromiter(
                (func(p, q) for p, q in zip(flat_a, flat_b)),
                dtype=float,
                count=len(flat_a),
            )
            return vals.reshape(out_shape)

    rng = np.random.default_rng(check_seed)
    shape = (16, 2) if bivariate else (16,)
    x = rng.standard_normal(shape)
    y = rng.standard_normal(shape)
    if not np.array_equal(np.asarray(vfunc(x, y)), np.asarray(vfunc(y, x))):
        raise ConfigurationError(f"kernel {name!r} failed the symmetry spot check")
    return Kernel(name, bivariate, vfunc)


def as_series(data, kernel: Optional[Kernel] = None, min_n: int = 2) -> np.ndarray:
    """Validate observations and return them as a float array.

    Univariate series become shape ``(n,)``, bivariate ones ``(n, 2)``.
    """
    arr = np.asarray(data, dtype=float)
    bivariate = kernel.bivariate if kernel is not None else arr.ndim == 2 and arr.shape[1] == 2
    if bivariate:
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise DataError(
                f"kernel {kernel.name if kernel else ''!s} needs bivariate observations, "
                f"got array of shape {arr.shape}"
            )
    else:
        if arr.ndim == 2 and arr.shape[1] == 1:
            arr = arr[:, 0]
        if arr.ndim != 1:
            raise DataError(
                f"kernel {kernel.name if kernel else ''!s} needs univariate observations, "
                f"got array of shape {arr.shape}"
            )
    if not np.all(np.isfinite(arr)):
        raise DataError("observations must be finite")
    if len(arr) < min_n:
        raise SampleTooSmallError(f"need at least {min_n} observations, got {len(arr)}")
    return np.ascontiguousarray(arr)


def row_sums(kernel: Kernel, series) -> np.ndarray:
    """``sum_j h(X_i, X_j)`` over all ``j`` including ``j == i``."""
    x = as_series(series, kernel)
    if kernel._row_sums is not None:
        return kernel._row_sums(x)
    return np.array([np.sum(kernel.pairwise(x, x[i])) for i in range(len(x))])


def projection(kernel: Kernel, series) -> ProjectionVector:
    """Empirical first-order projection of the kernel on the sample.

    ``values[i] = mean_j h(X_i, X_j) - U_{1:n}`` where the mean runs over all
    ``j`` including the diagonal term ``h(X_i, X_i)``.
    """
    x = as_series(series, kernel)
    n = len(x)
    rows = row_sums(kernel, x)
    diag = kernel.pairwise(x, x)
    u_full = float((np.sum(rows) - np.sum(diag)) / (n * (n - 1)))
    return ProjectionVector(rows / n - u_full, u_full)
