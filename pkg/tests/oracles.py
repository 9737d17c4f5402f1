"""Brute-force reference implementations used only by the tests.

Nothing here imports the package; kernels are spelled out again so the
oracles share no code with the implementation under test.
"""

import math

import numpy as np


def h_gmd(a, b):
    return abs(a - b)


def h_variance(a, b):
    return (a - b) ** 2 / 2.0


def h_covariance(a, b):
    return (a[0] - b[0]) * (a[1] - b[1]) / 2.0


def _sgn(v):
    return int(v > 0) - int(v < 0)


def h_kendall(a, b):
    return _sgn(a[0] - b[0]) * _sgn(a[1] - b[1])


ORACLE_KERNELS = {
    "gmd": h_gmd,
    "variance": h_variance,
    "covariance": h_covariance,
    "kendall": h_kendall,
}


def u_stat(h, xs):
    """Average of ``h`` over all unordered pairs of ``xs``."""
    m = len(xs)
    total = 0.0
    for i in range(m):
        for j in range(i + 1, m):
            total += h(xs[i], xs[j])
    return total / (m * (m - 1) / 2)


def diff_oracle(h, xs):
    """Direct evaluation of both difference processes, O(n^3).

    Returns lists indexed by ``k - 1``; entries outside the defined range
    are 0.
    """
    n = len(xs)
    full = u_stat(h, xs)
    dF = [0.0] * n
    dL = [0.0] * n
    for k in range(2, n + 1):
        first = u_stat(h, xs[:k])
        dF[k - 1] = k * (first - full)
        if k <= n - 2:
            last = u_stat(h, xs[k:])
            dL[k - 1] = k * (n - k) / n * (first - last)
    dF[n - 1] = 0.0
    return dF, dL


def projection_oracle(h, xs):
    n = len(xs)
    u = u_stat(h, xs)
    return [sum(h(xs[i], xs[j]) for j in range(n)) / n - u for i in range(n)]


def lrv_oracle(proj, b):
    """Bartlett long-run variance with a plain double loop."""
    n = len(proj)
    total = 0.0
    for lag in range(-(n - 1), n):
        w = max(0.0, 1.0 - abs(lag) / b)
        if w == 0.0:
            continue
        acc = 0.0
        for i in range(n - abs(lag)):
            acc += proj[i] * proj[i + abs(lag)]
        total += w * acc / n
    return 4.0 * total


def kolmogorov_cdf_oracle(x, terms=200):
    """Alternating series evaluated with a fixed, generous number of terms."""
    if x <= 0:
        return 0.0
    s = sum((-1) ** (k - 1) * math.exp(-2 * k * k * x * x) for k in range(1, terms))
    return 1.0 - 2.0 * s


def random_series(rng, kernel_name, n):
    if kernel_name in ("covariance", "kendall"):
        return rng.standard_normal((n, 2))
    return rng.standard_normal(n)


def as_tuples(x):
    x = np.asarray(x)
    return [tuple(r) for r in x] if x.ndim == 2 else list(x)


def pair_matrix(name, xs):
    """Full kernel matrix built with numpy outer operations."""
    x = np.asarray(xs, dtype=float)
    if name == "gmd":
        return np.abs(np.subtract.outer(x, x))
    if name == "variance":
        return np.subtract.outer(x, x) ** 2 / 2.0
    dx = np.subtract.outer(x[:, 0], x[:, 0])
    dy = np.subtract.outer(x[:, 1], x[:, 1])
    if name == "covariance":
        return dx * dy / 2.0
    return np.sign(dx) * np.sign(dy)


def diff_oracle_matrix(name, xs):
    """Same as :func:`diff_oracle` but reads block sums off the kernel matrix."""
    H = pair_matrix(name, xs)
    n = len(H)

    def u(lo, hi):
        block = H[lo:hi, lo:hi]
        m = hi - lo
        return (block.sum() - np.trace(block)) / (m * (m - 1))

    full = u(0, n)
    dF = np.zeros(n)
    dL = np.zeros(n)
    for k in range(2, n):
        first = u(0, k)
        dF[k - 1] = k * (first - full)
        if k <= n - 2:
            dL[k - 1] = k * (n - k) / n * (first - u(k, n))
    return dF, dL


def psi_oracle(t, tau, tf, tg, tfg):
    """Drift curves rebuilt from the limits of the segment U-statistics.

    A segment holding fractions ``a`` of pre-change and ``b`` of post-change
    observations has U-statistic limit
    ``(a^2 tf + b^2 tg + 2ab tfg) / (a + b)^2``.
    """

    def seg(a, b):
        return (a * a * tf + b * b * tg + 2 * a * b * tfg) / (a + b) ** 2

    if t <= 0.0 or t >= 1.0:
        return 0.0, 0.0
    first = seg(min(t, tau), max(t - tau, 0.0))
    full = seg(tau, 1.0 - tau)
    last = seg(max(tau - t, 0.0), min(1.0 - t, 1.0 - tau))
    return t * (first - full), t * (1.0 - t) * (first - last)


def gmd_normal_limit_variances(sd_f, sd_g, tau):
    """Limit variances for |x - y| with centred normal F and G, by quadrature."""
    from scipy import integrate
    from scipy.stats import norm

    def mean_abs(x, sd):
        z = x / sd
        return sd * (2 * norm.pdf(z) + z * (2 * norm.cdf(z) - 1))

    def var(fun, sd):
        lim = 12 * sd
        m1 = integrate.quad(lambda x: fun(x) * norm.pdf(x, scale=sd), -lim, lim, limit=200)[0]
        m2 = integrate.quad(lambda x: fun(x) ** 2 * norm.pdf(x, scale=sd), -lim, lim, limit=200)[0]
        return m2 - m1 * m1

    v_mix = var(lambda x: mean_abs(x, sd_f) - tau * mean_abs(x, sd_g), sd_f)
    v_f = var(lambda x: mean_abs(x, sd_f), sd_f)
    v_g = var(lambda y: mean_abs(y, sd_g), sd_g)
    z1 = 4 * tau * v_mix + 4 * tau**2 * (1 - tau) * v_g
    z2 = 4 * tau * (1 - tau) ** 2 * v_f + 4 * tau**2 * (1 - tau) * v_g
    return z1, z2
