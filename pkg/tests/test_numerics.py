"""
Tests for log-domain arithmetic and the closed-form geometric series.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.padic_hausdorff.numerics import (
    LogMagnitude,
    TailExponent,
    eulerian_polynomial,
    exp_poly_sum,
    geometric_tail_sum,
    linear_geometric_tail_sum,
    log_combine,
    one_minus_power,
    polynomial_geometric_tail_sum,
)
from src.padic_hausdorff.utils.error_handling import NonconvergentSum, ParameterOutOfRange

primes = st.sampled_from([2, 3, 5, 7])


class TestLogMagnitude:
    """Construction, conversion and arithmetic"""

    def test_zero_normalizes(self):
        value = LogMagnitude(0, 12.0, 3)
        assert value.is_zero
        assert value.exponent == 0.0
        assert value.to_real() == 0.0

    def test_negative_infinite_exponent_is_zero(self):
        assert LogMagnitude(1, -math.inf, 2).is_zero

    def test_rejects_bad_sign_and_base(self):
        with pytest.raises(ValueError):
            LogMagnitude(2, 0.0, 3)
        with pytest.raises(ValueError):
            LogMagnitude(1, 0.0, 1)

    def test_from_power(self):
        assert LogMagnitude.from_power(2, 10).to_real() == pytest.approx(1024.0)

    def test_diverges_is_not_finite(self):
        value = LogMagnitude.diverges(5)
        assert not value.is_finite
        assert value.to_real() == math.inf

    def test_huge_values_stay_representable(self):
        value = LogMagnitude.from_power(2, 5000) * LogMagnitude.from_power(2, -4990)
        assert value.to_real() == pytest.approx(1024.0)

    def test_products_and_quotients(self):
        a = LogMagnitude.from_real(6.0, 3)
        b = LogMagnitude.from_real(-2.0, 3)
        assert (a * b).to_real() == pytest.approx(-12.0)
        assert (a / b).to_real() == pytest.approx(-3.0)
        assert (a ** 2).to_real() == pytest.approx(36.0)

    def test_ordering(self):
        small = LogMagnitude.from_real(0.5, 2)
        large = LogMagnitude.from_real(3.0, 2)
        negative = LogMagnitude.from_real(-10.0, 2)
        assert negative < small < large
        assert max([small, negative, large]) is large

    @given(value=st.floats(min_value=1e-200, max_value=1e200), p=primes)
    @settings(max_examples=50)
    def test_from_real_round_trip(self, value, p):
        assert LogMagnitude.from_real(value, p).to_real() == pytest.approx(value, rel=1e-12)

    @given(
        a=st.floats(min_value=-1e6, max_value=1e6).filter(lambda x: abs(x) > 1e-6),
        b=st.floats(min_value=-1e6, max_value=1e6).filter(lambda x: abs(x) > 1e-6),
    )
    @settings(max_examples=50)
    def test_addition_matches_floats(self, a, b):
        total = LogMagnitude.from_real(a, 2) + LogMagnitude.from_real(b, 2)
        assert total.to_real() == pytest.approx(a + b, rel=1e-9, abs=1e-9 * (abs(a) + abs(b)))


class TestLogCombine:
    """Signed sums in the log domain"""

    def test_equal_terms_double(self):
        p = 3
        total = log_combine(p, [LogMagnitude.from_power(p, 3), LogMagnitude.from_power(p, 3)])
        assert total.sign == 1
        assert total.log_value == pytest.approx(3 + math.log(2, 3))

    def test_equal_terms_base_two(self):
        p = 2
        total = log_combine(p, [LogMagnitude.from_power(p, 3), LogMagnitude.from_power(p, 3)])
        assert total.log_value == pytest.approx(4.0)

    def test_exact_cancellation(self):
        x = LogMagnitude.from_real(7.25, 5)
        assert log_combine(5, [x, -x]).sign == 0

    def test_wide_dynamic_range(self):
        total = log_combine(2, [LogMagnitude.from_power(2, 300), LogMagnitude.from_power(2, -300)])
        assert total.log_value == pytest.approx(300.0)

    def test_empty_sum_is_zero(self):
        assert log_combine(7, []).is_zero

    def test_mixed_bases_rejected(self):
        with pytest.raises(ValueError):
            log_combine(2, [LogMagnitude.one(3)])

    def test_opposite_divergences(self):
        with pytest.raises(NonconvergentSum):
            log_combine(2, [LogMagnitude.diverges(2), LogMagnitude.diverges(2, -1)])


class TestGeometricSums:
    """Closed-form tails over theta <= R"""

    def test_geometric_tail_base_two(self):
        assert geometric_tail_sum(2, 1, 0).to_real() == pytest.approx(2.0)

    def test_geometric_tail_shifted(self):
        assert geometric_tail_sum(3, 2, 1).to_real() == pytest.approx(81 / 8)

    def test_geometric_tail_accepts_tail_exponent(self):
        assert geometric_tail_sum(2, TailExponent(1.0), 0).to_real() == pytest.approx(2.0)

    def test_geometric_tail_diverges(self):
        with pytest.raises(NonconvergentSum):
            geometric_tail_sum(2, -1, 0)

    def test_tail_exponent_must_be_finite(self):
        with pytest.raises(ParameterOutOfRange):
            TailExponent(math.inf)

    def test_linear_tail(self):
        assert linear_geometric_tail_sum(2, 1, 0).to_real() == pytest.approx(-2.0)

    def test_linear_tail_vanishes(self):
        assert linear_geometric_tail_sum(2, 1, 1).is_zero

    def test_linear_tail_diverges(self):
        with pytest.raises(NonconvergentSum):
            linear_geometric_tail_sum(5, 0, 0)

    def test_one_minus_power_small_exponent(self):
        c = 1e-12
        assert one_minus_power(2, c) == pytest.approx(c * math.log(2), rel=1e-9)

    @given(p=primes, c=st.floats(min_value=0.1, max_value=4.0), R=st.integers(-20, 20))
    @settings(max_examples=40)
    def test_geometric_tail_matches_direct_sum(self, p, c, R):
        direct = math.fsum(float(p) ** (t * c) for t in range(R - 400, R + 1))
        assert geometric_tail_sum(p, c, R).to_real() == pytest.approx(direct, rel=1e-10)

    @given(p=primes, c=st.floats(min_value=0.25, max_value=3.0), R=st.integers(-10, 10))
    @settings(max_examples=40)
    def test_linear_tail_matches_direct_sum(self, p, c, R):
        direct = math.fsum(t * float(p) ** (t * c) for t in range(R - 600, R + 1))
        assert linear_geometric_tail_sum(p, c, R).to_real() == pytest.approx(
            direct, rel=1e-9, abs=1e-12 * float(p) ** (R * c)
        )


class TestExpPolySum:
    """Polynomial-weighted exponential sums"""

    def test_eulerian_polynomials(self):
        assert eulerian_polynomial(0).tolist() == [1.0]
        assert eulerian_polynomial(2).tolist() == [1.0, 1.0]
        assert eulerian_polynomial(3).tolist() == [1.0, 4.0, 1.0]

    def test_finite_range(self):
        total = exp_poly_sum(2, 1.0, [1.0], 0, 3)
        assert total.to_real() == pytest.approx(15.0)

    def test_empty_range(self):
        assert exp_poly_sum(2, 1.0, [1.0], 3, 0).is_zero

    def test_upper_tail_must_decay(self):
        with pytest.raises(NonconvergentSum):
            exp_poly_sum(2, 0.5, [1.0], 0, math.inf)

    def test_bilateral_series_diverges(self):
        with pytest.raises(NonconvergentSum):
            exp_poly_sum(2, -1.0, [1.0], -math.inf, math.inf)

    def test_upper_tail_closed_form(self):
        total = exp_poly_sum(3, -1.0, [1.0], 0, math.inf)
        assert total.to_real() == pytest.approx(1.5)

    def test_polynomial_tail_degree_one_matches_linear(self):
        a = polynomial_geometric_tail_sum(2, 1.5, 2, 1).to_real()
        b = linear_geometric_tail_sum(2, 1.5, 2).to_real()
        assert a == pytest.approx(b, rel=1e-10)

    def test_polynomial_tail_degree_two(self):
        direct = math.fsum(t * t * 2.0 ** t for t in range(-400, 1))
        assert polynomial_geometric_tail_sum(2, 1.0, 0, 2).to_real() == pytest.approx(direct, rel=1e-10)
