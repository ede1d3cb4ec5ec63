"""
Tests for piecewise exponential polynomials on the scale lattice.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.padic_hausdorff.numerics import LogMagnitude
from src.padic_hausdorff.piecewise import PiecewiseExpPoly
from src.padic_hausdorff.utils.error_handling import NonconvergentSum


def direct_convolution(a, b):
    """Convolution of two finite value lists indexed from 0."""
    out = [0.0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


class TestConstruction:
    """Building and evaluating bodies"""

    def test_from_values(self):
        body = PiecewiseExpPoly.from_values(3, -2, [1.0, 0.0, -4.0])
        assert body(-2).to_real() == pytest.approx(1.0)
        assert body(-1).is_zero
        assert body(0).to_real() == pytest.approx(-4.0)
        assert body(1).is_zero
        assert body.support == (-2, 0)

    def test_zero(self):
        body = PiecewiseExpPoly.zero(2)
        assert body.is_zero
        assert body(5).is_zero

    def test_monomial_with_polynomial(self):
        body = PiecewiseExpPoly.monomial(2, 1.0, lo=0, coefficients=(0.0, 1.0))
        assert body(3).to_real() == pytest.approx(3 * 8.0)
        assert body(-1).is_zero

    def test_array_evaluation_matches_scalar(self):
        body = PiecewiseExpPoly.monomial(5, -0.5, lo=-3, hi=4) + PiecewiseExpPoly.from_values(5, 0, [2.0])
        ts = np.arange(-6, 7)
        values = body.to_real_array(ts)
        assert values.tolist() == pytest.approx([body(int(t)).to_real() for t in ts])


class TestAlgebra:
    """Shifts, sums, products and convolution"""

    def test_shift(self):
        body = PiecewiseExpPoly.from_values(2, 0, [1.0, 2.0])
        shifted = body.shifted(3)
        assert shifted(3).to_real() == pytest.approx(1.0)
        assert shifted(4).to_real() == pytest.approx(2.0)
        assert shifted(0).is_zero

    def test_difference_cancels(self):
        body = PiecewiseExpPoly.monomial(3, 0.7)
        assert (body - body)(4).is_zero

    def test_pointwise_product(self):
        a = PiecewiseExpPoly.monomial(2, 1.0, lo=0)
        b = PiecewiseExpPoly.monomial(2, -1.0, hi=5)
        product = a * b
        assert product(3).to_real() == pytest.approx(1.0)
        assert product(6).is_zero
        assert product(-1).is_zero

    def test_scaled_by_zero(self):
        assert PiecewiseExpPoly.monomial(2, 1.0).scaled(0.0).is_zero

    @given(
        a=st.lists(st.floats(-5, 5), min_size=1, max_size=6),
        b=st.lists(st.floats(-5, 5), min_size=1, max_size=6),
        start_a=st.integers(-5, 5),
        start_b=st.integers(-5, 5),
    )
    @settings(max_examples=40)
    def test_finite_convolution(self, a, b, start_a, start_b):
        p = 3
        out = PiecewiseExpPoly.from_values(p, start_a, a).convolve(
            PiecewiseExpPoly.from_values(p, start_b, b)
        )
        expected = direct_convolution(a, b)
        scale = sum(abs(x) for x in a) * sum(abs(y) for y in b) + 1.0
        for offset, value in enumerate(expected):
            got = out(start_a + start_b + offset).to_real()
            assert got == pytest.approx(value, abs=1e-9 * scale)

    def test_infinite_convolution_closed_form(self):
        # sum over g >= 0 of p^{-2g} * p^{(k-g)} = p^k / (1 - p^{-3})
        p = 2
        kernel = PiecewiseExpPoly.monomial(p, -2.0, lo=0)
        profile = PiecewiseExpPoly.monomial(p, 1.0)
        out = kernel.convolve(profile)
        for k in (-4, 0, 7):
            assert out(k).to_real() == pytest.approx(2.0 ** k / (1 - 2.0 ** -3), rel=1e-12)

    def test_divergent_convolution(self):
        p = 2
        kernel = PiecewiseExpPoly.monomial(p, 1.0, lo=0)
        profile = PiecewiseExpPoly.monomial(p, 0.5)
        with pytest.raises(NonconvergentSum):
            kernel.convolve(profile)


class TestSeries:
    """Weighted sums and absolute power sums"""

    def test_weighted_sum_finite(self):
        body = PiecewiseExpPoly.from_values(2, 0, [1.0, 1.0, 1.0])
        assert body.weighted_sum(1.0).to_real() == pytest.approx(7.0)

    def test_weighted_sum_tail(self):
        body = PiecewiseExpPoly.monomial(3, 0.0)
        assert body.weighted_sum(1.0, hi=0).to_real() == pytest.approx(1.5)

    def test_abs_power_sum_of_signed_values(self):
        body = PiecewiseExpPoly.from_values(2, 0, [-1.0, 2.0])
        assert body.abs_power_sum(2.0, 0.0).to_real() == pytest.approx(5.0)

    def test_abs_power_sum_closed_form(self):
        body = PiecewiseExpPoly.monomial(2, -1.0, lo=0)
        assert body.abs_power_sum(2.0, 1.0).to_real() == pytest.approx(2.0)

    def test_abs_power_sum_diverges(self):
        body = PiecewiseExpPoly.monomial(2, 1.0, lo=0)
        with pytest.raises(NonconvergentSum):
            body.abs_power_sum(1.0, 0.0)

    def test_explicit_tail_of_sign_changing_body(self):
        # |k| 2^{k} summed for k <= 0 equals 2
        body = PiecewiseExpPoly.monomial(2, 0.0, hi=0, coefficients=(0.0, 1.0))
        total = body.abs_power_sum(1.0, 1.0)
        assert total.to_real() == pytest.approx(2.0, rel=1e-12)
        assert math.isfinite(total.to_real())

    def test_scale_is_log_magnitude(self):
        body = PiecewiseExpPoly.monomial(2, 0.0, scale=LogMagnitude.from_power(2, 500))
        assert body(0).log_value == pytest.approx(500.0)
