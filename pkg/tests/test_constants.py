"""
Tests for the theorem constants.
"""

import math

import pytest

from src.padic_hausdorff.constants import (
    ConstantKind,
    ConstantParams,
    herz_a,
    herz_a_limit,
    split_constant,
    structural_k,
    theorem_constant,
)
from src.padic_hausdorff.operators import PhiKernel
from src.padic_hausdorff.utils.error_handling import ParameterOutOfRange


@pytest.fixture
def finite_kernel():
    return PhiKernel.from_mapping({-2: 0.5, 0: 1.0, 1: 2.0, 3: 0.25})


@pytest.fixture
def decaying_kernel():
    return PhiKernel.two_sided(1.0, 6.0)


class TestParsing:
    """Constant kind identifiers"""

    @pytest.mark.parametrize("text,kind", [
        ("C1", ConstantKind.C1),
        ("c4.1", ConstantKind.C41),
        ("C6*", ConstantKind.C6_STAR),
        ("c6star", ConstantKind.C6_STAR),
        ("K", ConstantKind.STRUCTURAL_K),
        ("A(r)", ConstantKind.HERZ_A),
    ])
    def test_parse(self, text, kind):
        assert ConstantKind.parse(text) == kind

    def test_unknown(self):
        with pytest.raises(ParameterOutOfRange):
            ConstantKind.parse("C10")


class TestSingleSums:
    """C1, C3, C5 and C6*"""

    def test_c1_unit_delta(self):
        params = ConstantParams(p=2, n=1, kernel=PhiKernel.delta(0), lam=-0.25)
        assert theorem_constant(ConstantKind.C1, params).to_real() == pytest.approx(1.0)

    def test_c1_shifted_delta(self):
        params = ConstantParams(p=2, n=1, kernel=PhiKernel.delta(1), alpha=0.0, lam=-0.25)
        assert theorem_constant(ConstantKind.C1, params).to_real() == pytest.approx(2 ** -0.75)

    def test_c1_matches_direct_sum(self, finite_kernel):
        p, n, alpha, lam = 3, 2, 0.5, -0.2
        params = ConstantParams(p=p, n=n, kernel=finite_kernel, alpha=alpha, lam=lam)
        exponent = 1 + (n + alpha) * lam
        direct = math.fsum(v * float(p) ** (-g * exponent) for g, v in finite_kernel.support)
        assert theorem_constant(ConstantKind.C1, params).to_real() == pytest.approx(direct)

    def test_c3_herz_exponent(self, finite_kernel):
        p, n, q, beta = 2, 1, 2.0, 0.25
        params = ConstantParams(p=p, n=n, kernel=finite_kernel, q=q, beta=beta)
        exponent = 1 - beta - n / q
        direct = math.fsum(v * float(p) ** (-g * exponent) for g, v in finite_kernel.support)
        assert theorem_constant(ConstantKind.C3, params).to_real() == pytest.approx(direct)

    def test_c5_adds_lambda_star(self, finite_kernel):
        params = ConstantParams(p=2, n=1, kernel=finite_kernel, q=1.0, lam_star=0.75)
        direct = math.fsum(v * 2.0 ** (-g * 0.75) for g, v in finite_kernel.support)
        assert theorem_constant(ConstantKind.C5, params).to_real() == pytest.approx(direct)

    def test_c6_star_even_m_nonnegative(self, finite_kernel):
        params = ConstantParams(p=2, n=1, kernel=finite_kernel, m=2, lam=-0.25)
        value = theorem_constant(ConstantKind.C6_STAR, params)
        direct = math.fsum(v * g ** 2 * 2.0 ** (-g * 0.75) for g, v in finite_kernel.support)
        assert value.to_real() == pytest.approx(direct)
        assert value.to_real() >= 0

    def test_c6_star_is_absolute(self):
        params = ConstantParams(p=2, n=1, kernel=PhiKernel.delta(-1), m=1, lam=-0.25)
        assert theorem_constant(ConstantKind.C6_STAR, params).to_real() == pytest.approx(2 ** 0.75)

    def test_divergence_is_reported(self):
        params = ConstantParams(p=2, n=1, kernel=PhiKernel.two_sided(1.0, 0.1), lam=-0.5)
        value = theorem_constant(ConstantKind.C1, params)
        assert not value.is_finite


class TestDoublingSums:
    """C6, C8 and C9"""

    def test_c6_single_term(self):
        p, n, alpha, lam = 2, 1, 0.0, -0.25
        params = ConstantParams(p=p, n=n, kernel=PhiKernel.delta(2), m=1, lam=lam, alphas=(alpha,))
        expected = 2.0 ** (-2 * 0.75) * (2 + 2.0 ** (2 * (alpha + n)))
        assert theorem_constant(ConstantKind.C6, params).to_real() == pytest.approx(expected)

    def test_c6_negative_scale(self):
        p, n = 3, 1
        params = ConstantParams(p=p, n=n, kernel=PhiKernel.delta(-1), m=2, lam=-0.1, alphas=(0.0, 0.5))
        exponent = 1 + n * -0.1
        expected = 3.0 ** exponent * (2 + 3.0 ** 1.0) * (2 + 3.0 ** 1.5)
        assert theorem_constant(ConstantKind.C6, params).to_real() == pytest.approx(expected)

    def test_c8_with_zero_lambda_is_c9(self, finite_kernel):
        params = ConstantParams(
            p=2, n=1, kernel=finite_kernel, m=2, q=1.0, beta_star=-0.5, lam_star=0.0, alphas=(0.0, 0.0)
        )
        c8 = theorem_constant(ConstantKind.C8, params)
        c9 = theorem_constant(ConstantKind.C9, params)
        assert c8.isclose(c9)

    def test_c6_needs_alphas(self, finite_kernel):
        params = ConstantParams(p=2, n=1, kernel=finite_kernel, m=2, alphas=(0.0,))
        with pytest.raises(ParameterOutOfRange):
            theorem_constant(ConstantKind.C6, params)


class TestSplitConstants:
    """C2, C4.1, C4.2 and C7 as two half-line sums"""

    @pytest.mark.parametrize("kind", [ConstantKind.C2, ConstantKind.C41, ConstantKind.C42, ConstantKind.C7])
    def test_halves_add_up(self, kind, finite_kernel):
        params = ConstantParams(
            p=2, n=1, kernel=finite_kernel, m=2, q=2.0, beta=-0.25, lam_star=-0.3, zeta=1.5, delta=1.8
        )
        upper, lower = split_constant(kind, params)
        assert theorem_constant(kind, params).isclose(upper + lower)

    def test_c2_halves(self, finite_kernel):
        p, n, zeta, delta, lam_star = 2, 1, 1.5, 1.8, -0.3
        params = ConstantParams(
            p=p, n=n, kernel=finite_kernel, lam_star=lam_star, zeta=zeta, delta=delta
        )
        upper, lower = split_constant(ConstantKind.C2, params)
        up_exp = 1 + n * zeta * lam_star
        low_exp = 1 + n * lam_star * (delta - 1) / delta
        expected_upper = math.fsum(
            v * float(p) ** (-g * up_exp) for g, v in finite_kernel.support if g >= 0
        )
        expected_lower = math.fsum(
            v * float(p) ** (-g * low_exp) for g, v in finite_kernel.support if g < 0
        )
        assert upper.to_real() == pytest.approx(expected_upper)
        assert lower.to_real() == pytest.approx(expected_lower)

    def test_not_split(self, finite_kernel):
        with pytest.raises(ParameterOutOfRange):
            split_constant(ConstantKind.C1, ConstantParams(p=2, n=1, kernel=finite_kernel))


class TestStructural:
    """K and A(r)"""

    def test_k_single_factor(self, decaying_kernel):
        params = ConstantParams(
            p=3, n=2, kernel=decaying_kernel, m=1, alpha=0.5, q=2.0, lam=-0.2,
            alphas=(0.5,), qs=(2.0,), lams=(-0.2,),
        )
        assert structural_k(params).to_real() == pytest.approx(1.0)

    def test_k_unweighted_two_factors(self, decaying_kernel):
        # alpha_i = alpha = 0 leaves (1 - p^{-n})^{1/q - sum 1/q_i} = 1
        params = ConstantParams(
            p=2, n=1, kernel=decaying_kernel, m=2, alpha=0.0, q=1.0, lam=-0.3,
            alphas=(0.0, 0.0), qs=(2.0, 2.0), lams=(-0.1, -0.2),
        )
        assert structural_k(params).to_real() == pytest.approx(1.0)

    def test_herz_a_approaches_limit(self, decaying_kernel):
        ells, ell = (2.0, 2.0), 1.0
        values = [
            herz_a(ConstantParams(p=2, n=1, kernel=decaying_kernel, m=2, ell=ell, ells=ells, r=r)).to_real()
            for r in range(1, 30)
        ]
        limit = herz_a_limit(ells, ell)
        assert limit == pytest.approx(1.0)
        assert values[-1] == pytest.approx(limit, rel=1e-6)
        steps = [abs(b - a) for a, b in zip(values, values[1:])]
        assert all(later <= earlier for earlier, later in zip(steps[2:], steps[3:]))

    def test_herz_a_via_theorem_constant(self, decaying_kernel):
        params = ConstantParams(p=3, n=1, kernel=decaying_kernel, m=1, ell=2.0, ells=(2.0,), r=2)
        direct = herz_a(params)
        assert theorem_constant(ConstantKind.HERZ_A, params).isclose(direct)
