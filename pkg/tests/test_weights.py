"""
Tests for power-weight classification and the Muckenhoupt comparisons.
"""

import math

import pytest

from src.padic_hausdorff.functions import RadialProfile, SeparableFunction
from src.padic_hausdorff.utils.error_handling import ParameterOutOfRange
from src.padic_hausdorff.weights import (
    a1_ratio,
    ap_product,
    check_mean_bound,
    check_sandwich,
    classify_power_weight,
    muckenhoupt_characteristic,
    off_center_product,
    reverse_holder_bracket,
    reverse_holder_ratio,
    sandwich_pairs,
)


class TestClassification:
    """A_ell membership and reverse Holder index"""

    def test_unweighted_is_a1(self):
        result = classify_power_weight(2, 1, 0.0, 1.0)
        assert result.member
        assert result.reverse_holder_index == math.inf

    def test_upper_endpoint_excluded(self):
        n, ell = 2, 3.0
        assert not classify_power_weight(3, n, n * (ell - 1), ell).member
        assert classify_power_weight(3, n, n * (ell - 1) - 0.01, ell).member

    def test_negative_exponent_index(self):
        result = classify_power_weight(2, 1, -0.5, 1.0)
        assert result.member
        assert result.reverse_holder_index == pytest.approx(2.0)

    def test_positive_exponent_not_a1(self):
        assert not classify_power_weight(2, 1, 0.5, 1.0).member
        assert classify_power_weight(2, 1, 0.5, 2.0).member

    def test_non_integrable(self):
        result = classify_power_weight(2, 1, -1.0, 2.0)
        assert not result.member
        assert not result.locally_integrable
        assert result.reverse_holder_index is None

    def test_ell_below_one(self):
        with pytest.raises(ParameterOutOfRange):
            classify_power_weight(2, 1, 0.0, 0.5)

    @pytest.mark.parametrize("n,ell,alpha", [
        (n, ell, alpha)
        for n in (1, 2)
        for ell in (1.0, 2.0, 3.0)
        for alpha in sorted({-n - 0.1, -n + 0.1, -0.1, 0.0, 0.1, n * (ell - 1) - 0.1, n * (ell - 1) + 0.1})
    ])
    def test_membership_table(self, n, ell, alpha):
        upper_ok = alpha <= 0 if ell == 1 else alpha < n * (ell - 1)
        result = classify_power_weight(3, n, alpha, ell)
        assert result.member is (alpha > -n and upper_ok)
        if alpha <= -n:
            assert result.reverse_holder_index is None
        elif alpha >= 0:
            assert result.reverse_holder_index == math.inf
        else:
            assert result.reverse_holder_index == pytest.approx(-n / alpha)


class TestCharacteristics:
    """Products over balls"""

    def test_centered_product_is_scale_invariant(self):
        values = [ap_product(3, 1, 0.5, 2.0, gamma).to_real() for gamma in (-3, 0, 4)]
        assert values == pytest.approx([values[0]] * 3)

    def test_unweighted_product_is_one(self):
        assert ap_product(2, 2, 0.0, 3.0, 1).to_real() == pytest.approx(1.0)

    def test_off_center_product(self):
        assert off_center_product(2, 1, 0.7, 2.0, 3, 1).to_real() == pytest.approx(1.0)

    def test_off_center_requires_missing_origin(self):
        with pytest.raises(ParameterOutOfRange):
            off_center_product(2, 1, 0.7, 2.0, 1, 1)

    def test_a1_ratio(self):
        # (1 - 1/2) / (1 - 2^{-1/2}) for alpha = -1/2, n = 1
        expected = 0.5 / (1 - 2 ** -0.5)
        assert a1_ratio(2, 1, -0.5, 0).to_real() == pytest.approx(expected)

    def test_characteristic_rejects_non_members(self):
        with pytest.raises(ParameterOutOfRange):
            muckenhoupt_characteristic(2, 1, 2.0, 2.0)

    def test_characteristic_is_at_least_one(self):
        assert muckenhoupt_characteristic(2, 1, -0.5, 1.0).to_real() >= 1.0


class TestReverseHolder:
    """Finite below the critical index, divergent above"""

    def test_ratio_diverges_above_index(self):
        assert not reverse_holder_ratio(2, 1, -0.5, 2.5, 0).is_finite

    def test_ratio_finite_below_index(self):
        assert reverse_holder_ratio(2, 1, -0.5, 1.5, 0).is_finite

    def test_bracket(self):
        assert reverse_holder_bracket(3, 2, -1.0) == (True, True)

    def test_bracket_needs_finite_index(self):
        with pytest.raises(ParameterOutOfRange):
            reverse_holder_bracket(3, 2, 0.5)


class TestComparisons:
    """Sandwich and mean bounds"""

    @pytest.mark.parametrize("p,n,alpha,ell,r", [
        (2, 1, -0.5, 2.0, 1.5),
        (3, 2, -1.0, 1.0, 1.5),
        (5, 1, 0.5, 2.0, 3.0),
    ])
    def test_sandwich(self, p, n, alpha, ell, r):
        pairs = sandwich_pairs(range(-3, 3), range(0, 9))
        report = check_sandwich(p, n, alpha, ell, r, pairs)
        assert report.passed
        assert report.pairs_checked == len(pairs) == 108
        # depth 0 includes E = B, where both ratios are 1
        assert 0 < report.lower_constant <= 1.0 + 1e-12
        assert 1.0 - 1e-12 <= report.upper_constant < math.inf

    def test_sandwich_needs_r_below_index(self):
        with pytest.raises(ParameterOutOfRange):
            check_sandwich(2, 1, -0.5, 2.0, 3.0, sandwich_pairs([0], [1]))

    def test_mean_bound(self):
        f = SeparableFunction.radial_only(2, 1, RadialProfile.finite_window(-3, [1.0, 2.0, 0.5, 4.0]))
        report = check_mean_bound(2, 1, f, 0.5, 2.0, range(-4, 5))
        assert report.passed
        assert report.balls_checked == 9
        assert report.per_ball[0] == 0.0
        assert report.constant > 0
