import math

import numpy as np
import pytest
from scipy.stats import kstwobign

from ucusum.errors import DomainError
from ucusum.nulldist import (
    SWITCHOVER,
    _alternating_tail,
    _theta_cdf,
    kolmogorov_cdf,
    kolmogorov_quantile,
    kolmogorov_sf,
    p_value,
)

from oracles import kolmogorov_cdf_oracle


class TestCdf:
    def test_five_percent_point(self):
        assert kolmogorov_cdf(1.3581) == pytest.approx(0.95, abs=1e-4)

    def test_limits(self):
        assert kolmogorov_cdf(0.0) == 0.0
        assert kolmogorov_cdf(-1.0) == 0.0
        assert abs(kolmogorov_cdf(10.0) - 1.0) <= 1e-12

    def test_against_scipy(self):
        for x in np.linspace(0.05, 4.0, 400):
            assert kolmogorov_cdf(x) == pytest.approx(kstwobign.cdf(x), abs=1e-10)

    def test_against_long_series(self):
        for x in (0.3, 0.5, 0.8276, 1.0, 1.3581, 2.0):
            assert kolmogorov_cdf(x) == pytest.approx(kolmogorov_cdf_oracle(x), abs=1e-12)

    def test_monotone_on_grid(self):
        vals = np.array([kolmogorov_cdf(x) for x in np.linspace(0.0, 5.0, 10_000)])
        assert np.all(np.diff(vals) >= 0.0)

    def test_series_agree_in_switchover_band(self):
        for x in np.linspace(0.15, 0.30, 151):
            assert abs(_theta_cdf(x) - (1.0 - _alternating_tail(x))) <= 1e-10
        assert SWITCHOVER == 0.2


class TestQuantile:
    def test_95(self):
        assert kolmogorov_quantile(0.95) == pytest.approx(1.3581, abs=5e-4)

    @pytest.mark.parametrize("p", [0.5, 0.9, 0.99, 1e-6, 0.999999])
    def test_inverse(self, p):
        assert kolmogorov_cdf(kolmogorov_quantile(p)) == pytest.approx(p, abs=1e-10)

    def test_median(self):
        q = kolmogorov_quantile(0.5)
        assert q == pytest.approx(0.8276, abs=1e-4)
        assert q == pytest.approx(kstwobign.ppf(0.5), abs=1e-10)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 2.0])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            kolmogorov_quantile(p)

    def test_median_by_simulated_bridges(self):
        # sup of a discretised bridge is biased low by about 0.58 / sqrt(steps)
        rng = np.random.default_rng(5)
        steps, reps = 2000, 20_000
        sups = np.empty(reps)
        for s in range(0, reps, 2000):
            w = np.cumsum(rng.standard_normal((2000, steps)), axis=1) / math.sqrt(steps)
            t = np.arange(1, steps + 1) / steps
            sups[s:s + 2000] = np.max(np.abs(w - t * w[:, -1:]), axis=1)
        med = np.median(sups) + 0.5826 / math.sqrt(steps)
        assert med == pytest.approx(kolmogorov_quantile(0.5), abs=0.01)


class TestPValue:
    def test_critical_value(self):
        assert p_value(1.3581) == pytest.approx(0.05, abs=1e-4)

    def test_zero(self):
        assert p_value(0.0) == 1.0

    def test_direct_series(self):
        x = 1.96
        direct = 2.0 * sum((-1) ** (k - 1) * math.exp(-2 * k * k * x * x) for k in range(1, 60))
        assert p_value(x) == pytest.approx(direct, abs=1e-10)
        assert p_value(x) == pytest.approx(1.0 - kolmogorov_cdf(x), abs=1e-12)

    def test_far_tail_keeps_precision(self):
        assert kolmogorov_sf(6.0) == pytest.approx(kstwobign.sf(6.0), rel=1e-8)
        assert kolmogorov_sf(6.0) > 0.0

    def test_monotone_decreasing(self):
        ts = np.linspace(0.0, 4.0, 2001)
        ps = [p_value(t) for t in ts]
        assert all(a >= b for a, b in zip(ps, ps[1:]))
        assert all(0.0 <= p <= 1.0 for p in ps)
