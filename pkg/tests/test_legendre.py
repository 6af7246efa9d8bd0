import math

import numpy as np
import pytest

from lossdev import (
    BlockSchedule,
    PortfolioModel,
    legendre_transform,
    limit_cgf,
    rate_I1,
    rate_I2,
    rate_expansion_check,
    rate_upper_bound,
)
from lossdev.legendre import transform_from_weights


class TestLegendreTransform:
    def test_interior_closed_form(self, pure_unit):
        x = math.tanh(1.0)
        rp = legendre_transform(pure_unit, x)
        assert rp.status == "interior"
        assert rp.lambda_star == pytest.approx(1.0, abs=1e-9)
        assert rp.rate == pytest.approx(x - math.log(math.cosh(1.0)), abs=1e-12)

    def test_origin(self, eq_mix):
        rp = legendre_transform(eq_mix, 0.0)
        assert rp.lambda_star == 0.0
        assert rp.rate == 0.0

    def test_boundary_value(self, pure_unit):
        rp = legendre_transform(pure_unit, 1.0)
        assert rp.status == "boundary"
        assert rp.rate == pytest.approx(math.log(2.0), abs=1e-12)

    def test_beyond_boundary(self, pure_unit):
        rp = legendre_transform(pure_unit, 1.5)
        assert rp.status == "infinite"
        assert rp.rate == math.inf

    def test_lower_side_mirror(self, pure_unit):
        rp = legendre_transform(pure_unit, -0.5)
        assert rp.status == "interior"
        assert rp.rate == pytest.approx(rate_I1(-0.5), abs=1e-10)
        assert rp.lambda_star < 0

    def test_solver_tolerance(self, eq_mix):
        for x in np.linspace(-2.4, 2.4, 25):
            rp = legendre_transform(eq_mix, float(x))
            if rp.status != "interior":
                continue
            resid = abs(limit_cgf(eq_mix, rp.lambda_star).d1 - x)
            assert resid <= 1e-10 * max(1.0, abs(x))

    def test_duality(self, eq_mix):
        for x in np.linspace(-2.0, 2.0, 21):
            rp = legendre_transform(eq_mix, float(x))
            if rp.status != "interior":
                continue
            lhs = limit_cgf(eq_mix, rp.lambda_star).value + rp.rate
            assert lhs == pytest.approx(rp.lambda_star * rp.x, abs=1e-9)

    def test_nonnegative_and_convex_on_grid(self, eq_mix):
        xs = np.linspace(-1.4, 1.4, 57)
        rates = [legendre_transform(eq_mix, float(x)).rate for x in xs]
        assert min(rates) >= 0.0
        for a, b, c in zip(rates, rates[1:], rates[2:]):
            assert b <= 0.5 * (a + c) + 1e-9


class TestClosedFormRates:
    def test_I1_values(self):
        assert rate_I1(0.0) == 0.0
        assert rate_I1(0.5) == pytest.approx(
            math.log(2) + 0.75 * math.log(0.75) + 0.25 * math.log(0.25), abs=1e-15)
        assert rate_I1(1.5) == math.inf
        assert rate_I1(1.0) == pytest.approx(math.log(2.0))

    def test_I2_values(self):
        assert rate_I2(0.0) == 0.0
        assert rate_I2(0.5) == pytest.approx(0.031583942401963216, abs=1e-12)
        assert rate_I2(2.0) == pytest.approx(math.log(2.0))
        assert rate_I2(-2.5) == math.inf

    def test_matches_numerical_transform(self, pure_unit, pure_double):
        for x in np.linspace(-0.99, 0.99, 51):
            got = legendre_transform(pure_unit, float(x)).rate
            assert abs(got - rate_I1(float(x))) <= 1e-8
        for x in np.linspace(-1.98, 1.98, 51):
            got = legendre_transform(pure_double, float(x)).rate
            assert abs(got - rate_I2(float(x))) <= 1e-8

    def test_strict_convexity(self):
        for rate, a in ((rate_I1, 1.0), (rate_I2, 2.0)):
            xs = np.arange(-a + 0.01, a - 0.01, 1e-3)
            vals = np.array([rate(float(x)) for x in xs])
            second = vals[2:] - 2 * vals[1:-1] + vals[:-2]
            assert np.all(second > 0)


class TestRateUpperBound:
    @pytest.fixture
    def block_mix(self, unit_class, double_class):
        rule = BlockSchedule(a0=1, growth=10, order=(0, 1), accelerating=True)
        return PortfolioModel((unit_class, double_class), rule=rule)

    def test_sandwiched_by_pure_rates(self, block_mix):
        grid = np.linspace(0.0, 5.0, 201)
        ends = [1, 11, 1011, 101011]
        j = rate_upper_bound(block_mix, 0.5, grid, ends)
        assert rate_I2(0.5) - 1e-6 <= j <= rate_I1(0.5) + 1e-6

    def test_positive_for_positive_x(self, block_mix):
        # fine grid near 0 so small x still sees its (small) maximizer
        grid = np.concatenate([np.linspace(0.0, 0.5, 201),
                               np.linspace(0.5, 5.0, 19)])
        for x in (0.01, 0.05, 0.2):
            assert rate_upper_bound(block_mix, x, grid, [10, 100, 1000]) > 0.0

    def test_single_class_matches_transform(self, unit_class, pure_unit):
        from lossdev import RoundRobin
        model = PortfolioModel((unit_class,), rule=RoundRobin((1,)))
        grid = np.linspace(0.0, 3.0, 601)
        j = rate_upper_bound(model, 0.5, grid, [100])
        assert j == pytest.approx(legendre_transform(pure_unit, 0.5).rate, abs=1e-4)

    def test_empty_grid(self, block_mix):
        with pytest.raises(ValueError):
            rate_upper_bound(block_mix, 0.5, [], [10])


class TestExpansion:
    def test_taylor_deviation_bounded(self):
        # stay above x ~ 0.03: below that the x^8 normalizer amplifies
        # float cancellation in the rate itself past the signal
        grids = [np.linspace(0.05, 0.2, 20), np.linspace(0.03, 0.12, 20)]
        for which in (1, 2):
            c_coarse = rate_expansion_check(which, grids[0])
            c_fine = rate_expansion_check(which, grids[1])
            assert math.isfinite(c_coarse) and math.isfinite(c_fine)
            assert c_fine <= 2 * c_coarse + 1.0

    def test_example_at_tenth(self):
        p6 = 0.005 + (1 / 12) * 1e-4 + (1 / 30) * 1e-6
        assert abs(rate_I1(0.1) - p6) <= 1e-8 * 2.0

    def test_leading_coefficient(self):
        for x in (1e-3, 1e-4):
            assert rate_I1(x) / x**2 == pytest.approx(0.5, rel=1e-5)
            assert rate_I2(x) / x**2 == pytest.approx(0.125, rel=1e-5)

    def test_rejects_out_of_range_grid(self):
        with pytest.raises(ValueError):
            rate_expansion_check(1, [0.5])


def test_transform_from_weights_respects_zero_weight(unit_class, double_class):
    rp = transform_from_weights((unit_class, double_class), (1.0, 0.0), 0.5)
    assert rp.rate == pytest.approx(rate_I1(0.5), abs=1e-10)
