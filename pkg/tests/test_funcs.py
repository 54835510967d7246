import math

import mpmath
import numpy as np
import pytest

from ratmin.cheb import Domain
from ratmin.funcs import FilterParams, bell_filter, builtin, builtin_ids, erf, smooth_filter

mpmath.mp.dps = 50


class TestErf:
    def test_zero(self):
        assert erf(0.0) == 0.0

    def test_odd(self):
        rng = np.random.default_rng(0)
        x = rng.uniform(0, 6, size=100)
        np.testing.assert_array_equal(erf(-x), -erf(x))

    def test_saturates(self):
        assert abs(erf(6.0) - 1.0) < 1e-12
        # strictly inside (-1, 1) until the double-precision tail saturates
        assert -1.0 < erf(-5.0) and erf(5.0) < 1.0
        assert abs(erf(-40.0)) <= 1.0 and abs(erf(40.0)) <= 1.0

    def test_against_high_precision_oracle(self):
        # 50-digit mpmath reference over a wide scan
        for x in np.linspace(-6, 6, 121):
            assert abs(erf(float(x)) - float(mpmath.erf(x))) <= 1e-12

    def test_monotone(self):
        # strict increase until increments fall below one ulp of 1.0,
        # never a decrease anywhere on the scan
        x = np.linspace(-6, 6, 10_000)
        assert np.all(np.diff(erf(x)) >= 0)
        core = x[np.abs(x) <= 5.4]
        assert np.all(np.diff(erf(core)) > 0)


class TestBuiltins:
    def test_ids(self):
        assert set(builtin_ids()) == {"f1", "f2", "f3", "f4", "filter", "bell", "relu"}

    def test_unknown_id(self):
        with pytest.raises(ValueError):
            builtin("f9")

    def test_domains(self):
        assert builtin("f1")[1] == Domain(0.0, 3.0)
        assert builtin("f2")[1] == Domain(-1.0, 2.0)
        assert builtin("f3")[1] == Domain(-1.0, 1.0)
        assert builtin("f4")[1] == Domain(-0.5, 0.5)

    def test_f1_knot_continuity(self):
        f, _ = builtin("f1")
        # both branches give 1 at the knot: -1+6-6+2 = 1 = 1^3
        assert f(1.0) == pytest.approx(1.0, abs=1e-12)
        left = f(1.0 - 1e-9)
        right = f(1.0 + 1e-9)
        assert abs(left - right) < 1e-8

    def test_f1_values(self):
        f, _ = builtin("f1")
        assert f(0.0) == pytest.approx(2.0)
        assert f(2.0) == pytest.approx(8.0)

    def test_f2_cusp(self):
        f, _ = builtin("f2")
        assert f(0.0) == 0.0
        assert f(-1.0) == pytest.approx(1.0)
        assert f(2.0) == pytest.approx(2.0 ** (2.0 / 3.0))

    def test_f3_composition(self):
        f, _ = builtin("f3")
        x = 0.37
        assert f(x) == pytest.approx(math.cos(9 * x) + math.sin(11 * x), abs=1e-14)

    def test_f4_vertex(self):
        f, _ = builtin("f4")
        assert f(0.1) == 0.0
        assert f(-0.4) == pytest.approx(0.5)

    def test_relu(self):
        f, _ = builtin("relu")
        assert f(-0.5) == 0.0
        assert f(0.5) == 0.5

    def test_continuity_on_domain(self):
        for func_id in builtin_ids():
            f, dom = builtin(func_id)
            x = np.linspace(dom.a, dom.b, 20_001)
            vals = f(x)
            step = np.max(np.abs(np.diff(vals)))
            assert step < 0.02, f"{func_id} jumps by {step}"


class TestFilter:
    def test_plateau_preserves_identity(self):
        f = smooth_filter()
        # eigenvalue-preserving plateau around the center
        assert f(0.4) == pytest.approx(0.4, abs=1e-4)
        for x in (0.3, 0.35, 0.45, 0.5):
            assert f(x) == pytest.approx(x, rel=1e-2)

    def test_annihilates_outside_band(self):
        f = smooth_filter()
        assert abs(f(0.0)) < 1e-6
        assert abs(f(0.8)) < 1e-6
        assert abs(f(-0.5)) < 1e-6

    def test_half_height_at_radius(self):
        f = smooth_filter()
        assert f(0.6) == pytest.approx(0.3, abs=1e-12)  # |x-c| = R -> x/2

    def test_bell_peak_and_tails(self):
        g = bell_filter()
        assert g(0.4) == pytest.approx(1.0, abs=3e-3)  # peak (1+erf(2))/2
        assert abs(g(0.0)) < 1e-6
        assert abs(g(0.75)) < 1e-6
        assert g(0.5) == pytest.approx(0.5, abs=1e-12)

    def test_params_validation(self):
        with pytest.raises(ValueError):
            FilterParams(rise=0.0)
        with pytest.raises(ValueError):
            FilterParams(width=-0.1)

    def test_custom_params(self):
        f = smooth_filter(FilterParams(center=0.0, width=0.4, rise=0.1))
        assert f(0.0) == pytest.approx(0.0)
        assert f(0.2) == pytest.approx(0.2, rel=1e-3)
