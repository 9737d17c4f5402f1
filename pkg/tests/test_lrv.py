import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ucusum.errors import ConfigurationError, DegenerateVarianceError
from ucusum.kernels import ProjectionVector, builtin_kernel, projection
from ucusum.lrv import CUBE_ROOT, LrvConfig, bartlett, long_run_variance, studentize
from ucusum.uproc import DiffProcess, diff_processes

from oracles import lrv_oracle

GMD = builtin_kernel("gmd")


def _proj(values):
    return ProjectionVector(np.asarray(values, dtype=float), 0.0)


class TestConfig:
    def test_defaults(self):
        cfg = LrvConfig()
        assert cfg.bandwidth == CUBE_ROOT and cfg.variant == "appendix_d"
        assert cfg.resolve_bandwidth(1000) == pytest.approx(10.0)
        assert cfg.resolve_bandwidth(63) == 63 ** (1 / 3)  # not rounded

    def test_auto_alias(self):
        assert LrvConfig("auto").bandwidth == CUBE_ROOT

    @pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), "n^(1/2)"])
    def test_bad_bandwidth(self, bad):
        with pytest.raises(ConfigurationError):
            LrvConfig(bad)

    def test_bandwidth_above_n_minus_one(self):
        with pytest.raises(ConfigurationError, match="exceeds"):
            LrvConfig(10.0).resolve_bandwidth(10)

    def test_bad_window_and_variant(self):
        with pytest.raises(ConfigurationError):
            LrvConfig(window="parzen")
        with pytest.raises(ConfigurationError):
            LrvConfig(variant="other")


class TestBartlett:
    def test_weights(self):
        np.testing.assert_allclose(bartlett([0, 0.25, -0.5, 1, 3]), [1, 0.75, 0.5, 0, 0])


class TestLongRunVariance:
    def test_two_points_lag_zero(self):
        p = projection(GMD, [0.0, 1.0])
        assert long_run_variance(p, LrvConfig(1.0)) == pytest.approx(1.0, abs=1e-15)

    def test_lag_zero_formula(self, rng):
        h = rng.standard_normal(50)
        got = long_run_variance(_proj(h), LrvConfig(1.0))
        assert got == pytest.approx(4.0 * np.sum(h * h) / 50, rel=1e-15)

    def test_intro_variant(self, rng):
        h = rng.standard_normal(50)
        got = long_run_variance(_proj(h), LrvConfig(variant="intro_gmd"))
        assert got == pytest.approx(2.0 * np.sum(h * h) / 50, rel=1e-14)

    @pytest.mark.parametrize("b", [1.0, 1.5, 2.0, 3.7, CUBE_ROOT])
    def test_against_double_loop(self, b, rng):
        h = rng.standard_normal(64)
        cfg = LrvConfig(b)
        ref = lrv_oracle(list(h), cfg.resolve_bandwidth(64))
        assert long_run_variance(_proj(h), cfg) == pytest.approx(ref, rel=1e-12)

    def test_constant_series_degenerate(self):
        with pytest.raises(DegenerateVarianceError) as info:
            long_run_variance(projection(GMD, np.full(20, 3.3)))
        assert info.value.value == 0.0

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(st.floats(-10, 10, allow_nan=False), min_size=8, max_size=80),
        st.floats(1.0, 7.0),
    )
    def test_bartlett_estimate_never_negative(self, h, b):
        h = np.asarray(h)
        try:
            v = long_run_variance(_proj(h), LrvConfig(b))
        except DegenerateVarianceError as exc:
            v = exc.value
        assert v >= -1e-12 * (1 + np.sum(h * h))

    def test_alternating_projection(self):
        # lag terms alternate in sign but the estimate stays positive
        h = np.tile([1.0, -1.0], 20)
        assert long_run_variance(_proj(h), LrvConfig(30.0)) > 0.0

    def test_location_invariance_exact_on_dyadic_data(self, rng):
        x = np.round(rng.standard_normal(200) * 64) / 64
        a = long_run_variance(projection(GMD, x))
        b = long_run_variance(projection(GMD, x + 1024.0))
        assert a == b

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=8, max_size=60, unique=True),
        st.floats(-1e4, 1e4, allow_nan=False),
    )
    def test_location_invariance(self, xs, shift):
        x = np.asarray(xs)
        try:
            a = long_run_variance(projection(GMD, x))
        except DegenerateVarianceError:
            return
        b = long_run_variance(projection(GMD, x + shift))
        spread = np.ptp(x) or 1.0
        assert b == pytest.approx(a, rel=1e-9, abs=1e-12 * (spread + abs(shift)) ** 2)


class TestStudentize:
    def test_example(self):
        d = DiffProcess(4, np.array([0, 2 / 3, 0, 0]), np.zeros(4), np.ones(4, bool), np.ones(4, bool))
        t1, t2 = studentize(d, 1.0)
        assert t1 == pytest.approx(1 / 3, abs=1e-15)
        assert t2 == 0.0

    def test_doubling_variance(self, rng):
        d = diff_processes(GMD, rng.standard_normal(40))
        a = studentize(d, 1.3)
        b = studentize(d, 2.6)
        np.testing.assert_allclose(np.array(a) / np.sqrt(2), b, rtol=1e-15)

    def test_nonpositive_rejected(self):
        d = diff_processes(GMD, np.arange(8.0))
        with pytest.raises(DegenerateVarianceError):
            studentize(d, 0.0)

    @pytest.mark.parametrize("name", ["gmd", "variance"])
    def test_scale_invariance(self, name, rng):
        k = builtin_kernel(name)
        x = rng.standard_normal(150)
        for c in (0.01, 3.0, 250.0):
            ref = studentize(diff_processes(k, x), long_run_variance(projection(k, x)))
            xc = c * x
            got = studentize(diff_processes(k, xc), long_run_variance(projection(k, xc)))
            np.testing.assert_allclose(got, ref, rtol=1e-9)
