"""Compiled inner loops for the built-in kernels.

Everything here works on plain float64/int64 arrays and knows nothing about
the public types; the callers in :mod:`ucusum.kernels` do the validation.
"""

import numba
import numpy as np


@numba.njit(cache=True)
def compensated_cumsum(rows):
    """Running sum of ``rows`` with Kahan compensation."""
    n = rows.shape[0]
    out = np.empty(n)
    total = 0.0
    comp = 0.0
    for k in range(n):
        y = rows[k] - comp
        t = total + y
        comp = (t - total) - y
        total = t
        out[k] = total
    return out


@numba.njit(cache=True)
def gmd_prefix_pairsums(x, ranks):
    """S[k-1] = sum_{i<j<=k} |x_i - x_j| for k = 1..n.

    ``ranks`` is a permutation of 0..n-1 ordering ``x`` (ties broken
    arbitrarily; tied values contribute zero on either side). Two Fenwick
    trees over the ranks hold counts and sums of the points seen so far.
    """
    n = x.shape[0]
    cnt = np.zeros(n + 1, dtype=np.int64)
    tot = np.zeros(n + 1)
    out = np.empty(n)
    seen_sum = 0.0
    s = 0.0
    comp = 0.0
    for k in range(n):
        r = ranks[k]
        xk = x[k]
        # points already inserted with a smaller rank
        c_lt = 0
        s_lt = 0.0
        j = r
        while j > 0:
            c_lt += cnt[j]
            s_lt += tot[j]
            j -= j & (-j)
        c_gt = k - c_lt
        s_gt = seen_sum - s_lt
        row = xk * (c_lt - c_gt) - (s_lt - s_gt)
        y = row - comp
        t = s + y
        comp = (t - s) - y
        s = t
        out[k] = s
        j = r + 1
        while j <= n:
            cnt[j] += 1
            tot[j] += xk
            j += j & (-j)
        seen_sum += xk
    return out


@numba.njit(cache=True)
def welford_prefix_variance(x):
    """Unbiased sample variance of x[:k] for k = 1..n (nan at k = 1)."""
    n = x.shape[0]
    out = np.empty(n)
    mean = 0.0
    m2 = 0.0
    for k in range(n):
        d = x[k] - mean
        mean += d / (k + 1)
        m2 += d * (x[k] - mean)
        out[k] = m2 / k if k > 0 else np.nan
    return out


@numba.njit(cache=True)
def welford_prefix_covariance(x, y):
    n = x.shape[0]
    out = np.empty(n)
    mx = 0.0
    my = 0.0
    c = 0.0
    for k in range(n):
        dx = x[k] - mx
        mx += dx / (k + 1)
        my += (y[k] - my) / (k + 1)
        c += dx * (y[k] - my)
        out[k] = c / k if k > 0 else np.nan
    return out


@numba.njit(cache=True)
def _sign(v):
    if v > 0.0:
        return 1
    if v < 0.0:
        return -1
    return 0


@numba.njit(cache=True)
def kendall_prefix_pairsums(x, y):
    """Integer pair sums S[k-1] = sum_{i<j<=k} sign((x_j-x_i)(y_j-y_i))."""
    n = x.shape[0]
    out = np.empty(n, dtype=np.int64)
    s = 0
    for k in range(n):
        xk = x[k]
        yk = y[k]
        row = 0
        for i in range(k):
            row += _sign(xk - x[i]) * _sign(yk - y[i])
        s += row
        out[k] = s
    return out


@numba.njit(cache=True)
def kendall_row_sums(x, y):
    """sum_j sign((x_j-x_i)(y_j-y_i)) over all j (diagonal term is 0)."""
    n = x.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        xi = x[i]
        yi = y[i]
        for j in range(i + 1, n):
            s = _sign(x[j] - xi) * _sign(y[j] - yi)
            out[i] += s
            out[j] += s
    return out
