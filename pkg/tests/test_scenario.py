"""
Tests for scenario construction, homogeneity relations and standing hypotheses.
"""

import math

import pytest

from src.padic_hausdorff.functions import RadialProfile, SeparableFunction
from src.padic_hausdorff.models.report import Theorem, VerificationMode
from src.padic_hausdorff.scenario import (
    Scenario,
    check_homogeneity,
    check_hypotheses,
    critical_index,
    resolved_delta,
)
from src.padic_hausdorff.utils.error_handling import ParameterOutOfRange


def scenario(theorem, **fields):
    fields.setdefault("p", 2)
    fields.setdefault("n", 1)
    return Scenario(scenario_id="s", theorem=theorem, **fields)


class TestDerivation:
    """Defaults and derived aggregates"""

    def test_defaults_fill_per_factor_values(self):
        s = scenario(Theorem.T31, qs=(2.0, 2.0))
        assert s.m == 2
        assert s.alphas == (0.0, 0.0)
        assert s.lams == (0.0, 0.0)
        assert s.ells == (1.0, 1.0)
        assert all(math.isinf(r) for r in s.rs)

    def test_aggregates(self):
        s = scenario(Theorem.T31, qs=(2.0, 2.0), lams=(-0.25, -0.125))
        assert s.q == pytest.approx(1.0)
        assert s.alpha == pytest.approx(0.0)
        assert s.lam == pytest.approx(-0.375)
        assert s.lam_star == pytest.approx(-0.375)
        assert s.ell == pytest.approx(0.5)

    def test_weighted_aggregates(self):
        s = scenario(Theorem.T31, n=2, qs=(2.0, 4.0), alphas=(1.0, -1.0), lams=(-0.25, -0.1))
        q = 4 / 3
        assert s.q == pytest.approx(q)
        assert s.alpha == pytest.approx(q * (1.0 / 2 - 1.0 / 4))
        assert (2 + s.alpha) * s.lam == pytest.approx(3 * -0.25 + 1 * -0.1)

    def test_commutator_exponents_include_r(self):
        s = scenario(Theorem.T43, qs=(4.0, 4.0), rs=(4.0, 4.0), lams=(0.1, 0.2))
        assert s.q == pytest.approx(1.0)
        assert s.beta_star == pytest.approx(-0.5)

    def test_target_herz_index_from_q_star(self):
        s = scenario(Theorem.T34I, qs=(2.0, 2.0), betas=(-0.25, -0.25), q_star=2.0, alpha=-0.5)
        assert s.beta_star == pytest.approx(1 * (1 / 1.0 - 1 / 2.0) - 0.5)

    def test_mode_defaults(self):
        assert scenario(Theorem.T31).mode == VerificationMode.SHARPNESS
        assert scenario(Theorem.T41II, rs=(2.0,)).mode == VerificationMode.SHARPNESS
        assert scenario(Theorem.T32).mode == VerificationMode.SUFFICIENCY
        assert scenario(Theorem.T31, mode=VerificationMode.SUFFICIENCY).mode == VerificationMode.SUFFICIENCY

    def test_default_omega(self):
        s = scenario(Theorem.T31, p=3)
        assert s.omega.is_constant
        assert s.omega.integral().to_real() == pytest.approx(2 / 3)

    def test_length_mismatch(self):
        with pytest.raises(ParameterOutOfRange):
            scenario(Theorem.T31, qs=(1.0, 2.0), alphas=(0.0,))

    def test_no_factors(self):
        with pytest.raises(ParameterOutOfRange):
            scenario(Theorem.T31, qs=())

    def test_with_changes_keeps_aggregates(self):
        s = scenario(Theorem.T31, qs=(2.0,), lams=(-0.25,))
        changed = s.with_changes(scenario_id="t")
        assert changed.scenario_id == "t"
        assert changed.q == s.q
        assert changed.lam == s.lam


class TestHomogeneity:
    """Violated relations are reported by name"""

    def test_consistent_scenario(self):
        assert check_homogeneity(scenario(Theorem.T31, qs=(2.0, 2.0), lams=(-0.25, -0.25))) == []

    def test_explicit_q_mismatch(self):
        s = scenario(Theorem.T31, qs=(2.0, 2.0), q=2.0)
        assert check_homogeneity(s) == ["sum 1/q_i = 1/q"]

    def test_explicit_lambda_mismatch(self):
        s = scenario(Theorem.T31, qs=(2.0,), lams=(-0.25,), lam=-0.1)
        assert check_homogeneity(s) == ["sum (n+alpha_i) lambda_i = (n+alpha) lambda"]

    def test_explicit_beta_mismatch(self):
        s = scenario(Theorem.T33, qs=(2.0, 2.0), betas=(0.1, 0.2), beta=0.5)
        assert "sum beta_i = beta" in check_homogeneity(s)

    def test_relation_outside_theorem_ignored(self):
        # T31 has no Herz index relation
        s = scenario(Theorem.T31, qs=(2.0,), lams=(-0.25,), betas=(0.1,), beta=0.5)
        assert check_homogeneity(s) == []

    def test_tolerance_comes_from_config(self, default_config):
        s = scenario(Theorem.T31, qs=(2.0, 2.0), q=1.0 + 1e-9)
        assert check_homogeneity(s) == ["sum 1/q_i = 1/q"]
        default_config.verification.homogeneity_tolerance = 1e-6
        assert check_homogeneity(s) == []


class TestHypotheses:
    """Standing hypotheses as readable messages"""

    def test_t31_lambda_range(self):
        problems = check_hypotheses(scenario(Theorem.T31, qs=(2.0,), lams=(0.5,)))
        assert problems == ["lambda_1=0.5 must lie in (-1/q_1, 0) = (-0.5, 0)"]

    def test_t31_valid(self):
        assert check_hypotheses(scenario(Theorem.T31, qs=(2.0, 2.0), lams=(-0.25, -0.25))) == []

    def test_t35_needs_positive_lambda(self):
        problems = check_hypotheses(scenario(Theorem.T35, qs=(2.0,), lams=(0.0,)))
        assert problems == ["lambda_1=0.0 must be > 0"]

    def test_t43_allows_zero_lambda(self):
        s = scenario(Theorem.T43, qs=(2.0,), rs=(2.0,), lams=(0.0,))
        assert check_hypotheses(s) == []

    def test_cor44_needs_zero_lambda(self):
        s = scenario(Theorem.COR44, qs=(2.0,), rs=(2.0,), lams=(0.1,))
        assert "lambda_i must be 0" in check_hypotheses(s)

    def test_commutator_needs_finite_r(self):
        s = scenario(Theorem.T41I, qs=(2.0,), lams=(-0.25,))
        assert "r_i must be finite and >= 1" in check_hypotheses(s)

    def test_exponents_below_one(self):
        s = scenario(Theorem.T33, qs=(0.5,), ells=(0.5,))
        problems = check_hypotheses(s)
        assert "exponents q_i and q must be >= 1" in problems
        assert "ell_i must be >= 1" in problems

    def test_weight_exponent_floor(self):
        s = scenario(Theorem.T33, qs=(2.0,), alphas=(-1.0,))
        assert "weight exponents must exceed -n" in check_hypotheses(s)

    def test_t34_case_split(self):
        # 1/q_1 + beta_1/n = 1 - 0.75 >= 0 puts this in case (i)
        fields = dict(qs=(1.0,), betas=(-0.75,), alpha=-0.5, q_star=1.0)
        assert not any("case (i)" in m for m in check_hypotheses(scenario(Theorem.T34I, **fields)))
        assert any("case (ii)" in m for m in check_hypotheses(scenario(Theorem.T34II, **fields)))

    def test_single_weight_needs_finite_index(self):
        problems = check_hypotheses(scenario(Theorem.T32, qs=(2.0,), lams=(-0.25,), q_star=1.0))
        assert any("reverse Holder index" in m for m in problems)

    def test_single_weight_needs_equal_alphas(self):
        s = scenario(Theorem.T32, qs=(2.0, 2.0), alphas=(-0.5, -0.25), lams=(-0.1, -0.1), q_star=1.0)
        assert "single-weight theorems need alpha_i = alpha" in check_hypotheses(s)

    def test_t32_exponent_gap(self):
        # r_w = 2 for alpha = -1/2 on Q_2, so q must exceed 2 q* = 2
        s = scenario(Theorem.T32, qs=(2.0,), alpha=-0.5, lams=(-0.25,), q_star=1.0)
        assert any("must exceed" in m for m in check_hypotheses(s))

    def test_hardy_is_linear(self):
        s = scenario(Theorem.HARDY, qs=(1.0, 1.0))
        assert "the Hardy reduction is linear (m = 1)" in check_hypotheses(s)

    def test_function_count(self):
        f = SeparableFunction.radial_only(2, 1, RadialProfile.indicator(0))
        s = scenario(Theorem.T31, qs=(2.0, 2.0), lams=(-0.25, -0.25), functions=(f,))
        assert "1 functions for m=2" in check_hypotheses(s)


class TestDelta:
    """Reverse Holder index and the default delta"""

    def test_critical_index(self):
        assert critical_index(scenario(Theorem.T32, alpha=-0.5)) == pytest.approx(2.0)

    def test_default_delta_is_midpoint(self):
        assert resolved_delta(scenario(Theorem.T32, alpha=-0.5)) == pytest.approx(1.5)

    def test_explicit_delta(self):
        assert resolved_delta(scenario(Theorem.T32, alpha=-0.5, delta=1.2)) == 1.2

    def test_unweighted_has_no_default(self):
        assert resolved_delta(scenario(Theorem.T32)) is None

    def test_delta_outside_range(self):
        s = scenario(Theorem.T32, qs=(8.0,), alpha=-0.5, lams=(-0.1,), q_star=1.0, delta=3.0)
        assert "delta=3.0 must lie in (1, 2.0)" in check_hypotheses(s)
