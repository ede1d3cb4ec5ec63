"""
Tests for the rough multilinear Hausdorff operator, its commutator and the
scale kernels.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.padic_hausdorff.functions import (
    AngularFactor,
    ExtremalFamily,
    RadialProfile,
    SeparableFunction,
    evaluate_profile,
    make_extremal,
)
from src.padic_hausdorff.numerics import one_minus_power
from src.padic_hausdorff.operators import (
    KernelKind,
    PhiKernel,
    apply_commutator,
    apply_hausdorff,
    hardy_average,
    kernel_sum,
    output_function,
)
from src.padic_hausdorff.utils.error_handling import (
    DimensionMismatch,
    NonconvergentSum,
    ParameterOutOfRange,
)


def window_function(p, n, start, values, angular=None):
    angular = angular or AngularFactor.constant(p, n)
    return SeparableFunction(RadialProfile.finite_window(start, values), angular)


def direct_hausdorff(p, n, kernel_values, omega, fs, k):
    """Defining double sum for finite kernels, integrating cell by cell."""
    level = max([omega.level] + [f.angular.level for f in fs])
    cells = omega.at_level(level)
    angulars = [f.angular.at_level(level) for f in fs]
    cell = cells.cell_measure.to_real()
    angular = math.fsum(
        cell * cells.values[i] * math.prod(a.values[i] for a in angulars)
        for i in range(len(cells.values))
    )
    total = 0.0
    for gamma, phi in kernel_values.items():
        radial = math.prod(evaluate_profile(p, f.radial, k - gamma).to_real() for f in fs)
        total += phi * float(p) ** -gamma * angular * radial
    return total


class TestKernels:
    """Kernel families and their sums"""

    def test_delta(self):
        kernel = PhiKernel.delta(2, 3.0)
        assert kernel.kind == KernelKind.FINITE_SUPPORT
        assert kernel.value(2, 2) == 3.0
        assert kernel.value(2, 1) == 0.0

    def test_negative_values_rejected(self):
        with pytest.raises(ParameterOutOfRange):
            PhiKernel.from_mapping({0: -1.0})

    def test_two_sided_needs_decay(self):
        with pytest.raises(ParameterOutOfRange):
            PhiKernel.two_sided(1.0, 0.0)

    def test_two_sided_values(self):
        kernel = PhiKernel.two_sided(2.0, 1.5)
        assert kernel.value(3, 2) == pytest.approx(2.0 * 3.0 ** -3)
        assert kernel.value(3, -2) == pytest.approx(2.0 * 3.0 ** -3)

    def test_hardy_kernel(self):
        kernel = PhiKernel.hardy(3)
        assert kernel.value(2, 1) == pytest.approx(0.25)
        assert kernel.value(2, -1) == 0.0

    def test_finite_kernel_sum(self):
        kernel = PhiKernel.from_mapping({0: 1.0, 1: 2.0})
        assert kernel_sum(2, kernel, 1.0).to_real() == pytest.approx(2.0)

    def test_two_sided_kernel_sum(self):
        p, decay, s = 2, 2.0, 0.5
        kernel = PhiKernel.two_sided(1.0, decay)
        upper = 1 / one_minus_power(p, decay + s)
        lower = float(p) ** -(decay - s) / one_minus_power(p, decay - s)
        assert kernel_sum(p, kernel, s).to_real() == pytest.approx(upper + lower, rel=1e-12)

    def test_kernel_sum_diverges(self):
        with pytest.raises(NonconvergentSum):
            kernel_sum(2, PhiKernel.two_sided(1.0, 0.5), 1.0)

    def test_kernel_sum_with_degree(self):
        kernel = PhiKernel.from_mapping({1: 1.0, 2: 1.0})
        assert kernel_sum(2, kernel, 0.0, degree=2).to_real() == pytest.approx(5.0)


class TestHausdorff:
    """apply_hausdorff"""

    def test_single_term(self):
        f = window_function(2, 1, 0, [1.0])
        out = apply_hausdorff(2, 1, PhiKernel.delta(0), AngularFactor.constant(2, 1), [f])
        assert evaluate_profile(2, out, 0).to_real() == pytest.approx(0.5)
        for k in (-1, 1, 5):
            assert evaluate_profile(2, out, k).is_zero

    def test_zero_kernel(self):
        f = window_function(3, 1, -2, [1.0, 2.0])
        out = apply_hausdorff(3, 1, PhiKernel.zero(), AngularFactor.constant(3, 1), [f])
        assert out.as_piecewise(3).is_zero

    def test_cancelling_angular_factor(self):
        omega = AngularFactor.from_values(3, 1, 1, [1.0, -1.0])
        f = window_function(3, 1, 0, [1.0])
        out = apply_hausdorff(3, 1, PhiKernel.delta(1), omega, [f])
        assert out.as_piecewise(3).is_zero

    def test_matches_defining_sum(self):
        p, n = 3, 1
        kernel_values = {-1: 0.5, 0: 1.0, 2: 2.0}
        omega = AngularFactor.from_values(p, n, 1, [1.0, 3.0])
        fs = [
            window_function(p, n, -1, [1.0, 2.0, 0.5], AngularFactor.from_values(p, n, 1, [2.0, 1.0])),
            window_function(p, n, 0, [1.0, -1.0]),
        ]
        out = apply_hausdorff(p, n, PhiKernel.from_mapping(kernel_values), omega, fs)
        for k in range(-4, 6):
            expected = direct_hausdorff(p, n, kernel_values, omega, fs, k)
            assert evaluate_profile(p, out, k).to_real() == pytest.approx(expected, abs=1e-12)

    def test_power_law_output(self):
        p, n, q, lam = 2, 1, 2.0, -0.25
        f = make_extremal(p, n, ExtremalFamily.CENTRAL_MORREY_POWER, q=q, lam=lam)
        kernel = PhiKernel.two_sided(1.0, 2.0)
        out = apply_hausdorff(p, n, kernel, AngularFactor.constant(p, n), [f])
        c1 = kernel_sum(p, kernel, 1 + n * lam).to_real()
        for k in (-3, 0, 4):
            expected = c1 * (1 - 1 / p) * float(p) ** (k * n * lam)
            assert evaluate_profile(p, out, k).to_real() == pytest.approx(expected, rel=1e-12)

    @given(c=st.floats(0.1, 10.0), j=st.integers(0, 1))
    @settings(max_examples=20)
    def test_linear_in_each_factor(self, c, j):
        p, n = 2, 1
        omega = AngularFactor.constant(p, n)
        kernel = PhiKernel.from_mapping({0: 1.0, 1: 0.5})
        fs = [window_function(p, n, 0, [1.0, 2.0]), window_function(p, n, -1, [3.0])]
        scaled = list(fs)
        scaled[j] = fs[j].scaled(c)
        base = apply_hausdorff(p, n, kernel, omega, fs)
        out = apply_hausdorff(p, n, kernel, omega, scaled)
        for k in range(-2, 3):
            expected = c * evaluate_profile(p, base, k).to_real()
            assert evaluate_profile(p, out, k).to_real() == pytest.approx(expected, rel=1e-12)

    def test_dilation_covariance(self):
        p, n = 3, 2
        omega = AngularFactor.constant(p, n)
        kernel = PhiKernel.from_mapping({0: 1.0, 2: 0.25})
        fs = [window_function(p, n, 0, [1.0, 4.0])]
        shifted = [window_function(p, n, 1, [1.0, 4.0])]
        base = apply_hausdorff(p, n, kernel, omega, fs)
        moved = apply_hausdorff(p, n, kernel, omega, shifted)
        for k in range(-2, 6):
            assert evaluate_profile(p, moved, k + 1).isclose(evaluate_profile(p, base, k))

    def test_hardy_reduction(self):
        p, n = 2, 1
        f = window_function(p, n, -3, [1.0, 0.25, 2.0, 0.0, 1.5])
        out = apply_hausdorff(p, n, PhiKernel.hardy(n), AngularFactor.constant(p, n), [f])
        for k in range(-5, 6):
            assert evaluate_profile(p, out, k).to_real() == pytest.approx(
                hardy_average(p, n, f, k).to_real(), rel=1e-12, abs=1e-15
            )

    def test_dimension_mismatch(self):
        f = window_function(3, 1, 0, [1.0])
        with pytest.raises(DimensionMismatch):
            apply_hausdorff(2, 1, PhiKernel.delta(0), AngularFactor.constant(2, 1), [f])

    def test_needs_a_function(self):
        with pytest.raises(DimensionMismatch):
            apply_hausdorff(2, 1, PhiKernel.delta(0), AngularFactor.constant(2, 1), [])

    def test_divergent_scale_sum(self):
        f = SeparableFunction.radial_only(2, 1, RadialProfile.power_law(0.5))
        kernel = PhiKernel.piecewise_power(positive=(1.0, -2.0))
        with pytest.raises(NonconvergentSum):
            apply_hausdorff(2, 1, kernel, AngularFactor.constant(2, 1), [f])

    def test_output_function_is_radial(self):
        profile = RadialProfile.finite_window(0, [1.0])
        g = output_function(5, 2, profile)
        assert g.angular.is_constant
        assert (g.p, g.n) == (5, 2)


class TestCommutator:
    """apply_commutator"""

    @pytest.fixture
    def log_symbol(self):
        return make_extremal(2, 1, ExtremalFamily.LOG_SYMBOL)

    def test_log_symbols_at_gamma_zero_vanish(self, log_symbol):
        f = window_function(2, 1, 0, [1.0, 2.0])
        out = apply_commutator(2, 1, PhiKernel.delta(0), AngularFactor.constant(2, 1), [log_symbol], [f])
        assert out.as_piecewise(2).is_zero

    def test_constant_symbols_vanish(self):
        b = SeparableFunction.radial_only(2, 1, RadialProfile.constant(3.0))
        f = window_function(2, 1, 0, [1.0])
        out = apply_commutator(2, 1, PhiKernel.two_sided(1.0, 3.0), AngularFactor.constant(2, 1), [b], [f])
        assert out.as_piecewise(2).is_zero

    def test_log_symbol_difference_is_gamma(self, log_symbol):
        p, n = 2, 1
        f = window_function(p, n, 0, [1.0])
        kernel = PhiKernel.from_mapping({2: 1.0, -1: 1.0})
        out = apply_commutator(p, n, kernel, AngularFactor.constant(p, n), [log_symbol], [f])
        # h(k) = (1/2) sum_g Phi g 2^{-g} chi(k - g = 0)
        assert evaluate_profile(p, out, 2).to_real() == pytest.approx(0.5 * 2 * 0.25)
        assert evaluate_profile(p, out, -1).to_real() == pytest.approx(0.5 * -1 * 2.0)

    def test_infinite_kernel_matches_gamma_power(self, log_symbol):
        p, n, q, lam = 2, 1, 2.0, -0.25
        f = make_extremal(p, n, ExtremalFamily.CENTRAL_MORREY_POWER, q=q, lam=lam)
        kernel = PhiKernel.two_sided(1.0, 2.0)
        out = apply_commutator(p, n, kernel, AngularFactor.constant(p, n), [log_symbol], [f])
        c = kernel_sum(p, kernel, 1 + n * lam, degree=1).to_real()
        for k in (-2, 0, 3):
            expected = c * 0.5 * float(p) ** (k * n * lam)
            assert evaluate_profile(p, out, k).to_real() == pytest.approx(expected, rel=1e-10)

    def test_general_symbol_needs_finite_kernel(self):
        b = SeparableFunction.radial_only(2, 1, RadialProfile.finite_window(0, [1.0, 2.0]))
        f = window_function(2, 1, 0, [1.0])
        with pytest.raises(ParameterOutOfRange):
            apply_commutator(2, 1, PhiKernel.two_sided(1.0, 3.0), AngularFactor.constant(2, 1), [b], [f])

    def test_symbol_count(self, log_symbol):
        f = window_function(2, 1, 0, [1.0])
        with pytest.raises(DimensionMismatch):
            apply_commutator(2, 1, PhiKernel.delta(1), AngularFactor.constant(2, 1), [log_symbol] * 2, [f])

    def test_non_radial_symbol(self):
        b = SeparableFunction(RadialProfile.log_scale(), AngularFactor.from_values(3, 1, 1, [1.0, 2.0]))
        f = window_function(3, 1, 0, [1.0])
        with pytest.raises(ParameterOutOfRange):
            apply_commutator(3, 1, PhiKernel.delta(1), AngularFactor.constant(3, 1), [b], [f])
