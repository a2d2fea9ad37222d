"""Point values of the closed-form laws.

Reference numbers were computed once with mpmath at 30 digits from
independent routes (nested quadrature of the joint density, the
eigenfunction expansion of the two-sided exit time, direct series for
Catalan's constant) and are frozen here.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from drawdown import analytic as A
from drawdown.errors import DomainError

CH1 = math.cosh(1.0)


class TestScaleAndPsi:
    def test_scale_driftless_is_identity(self):
        assert A.scale(0.0, 1.5) == 1.5

    def test_scale_vanishes_at_origin(self):
        for mu in (-2.0, 0.0, 0.3, 5.0):
            assert A.scale(mu, 0.0) == 0.0

    @pytest.mark.parametrize(
        "mu, x, expected",
        [(1.0, 1.0, 0.43233235838169365), (-0.7, 2.0, 11.031890550783606)],
    )
    def test_scale_values(self, mu, x, expected):
        assert A.scale(mu, x) == pytest.approx(expected, rel=1e-13)

    def test_scale_continuous_through_zero_drift(self):
        x = 2.0
        assert A.scale(1e-10, x) == pytest.approx(x, rel=1e-9)
        assert A.scale(-1e-10, x) == pytest.approx(x, rel=1e-9)
        assert A.scale(1e-7, x) == pytest.approx(-math.expm1(-2e-7 * x) / 2e-7, rel=1e-14)

    def test_hit_before_boundaries_and_symmetry(self):
        assert A.hit_before(0.4, -1.0, -1.0, 2.0) == 1.0
        assert A.hit_before(0.4, 2.0, -1.0, 2.0) == 0.0
        assert A.hit_before(0.0, 0.5, -1.0, 2.0) == pytest.approx(0.5)

    def test_hit_before_drifted(self):
        assert A.hit_before(1.0, 0.0, -1.0, 1.0) == pytest.approx(0.11920292202211756, rel=1e-13)

    def test_hit_before_outside_interval(self):
        with pytest.raises(DomainError):
            A.hit_before(0.0, 3.0, -1.0, 2.0)

    def test_psi_values(self):
        assert A.psi(0.0, 0.7, 0.5) == 1.0
        assert A.psi(1.0, 0.0, 0.5) == pytest.approx(CH1, rel=1e-14)
        assert A.psi(1.0, 1.0, 0.5) == pytest.approx(1.304677973964021, rel=1e-13)
        assert A.psi(2.0, -0.3, 1.2) == pytest.approx(17.367432308896935, rel=1e-13)

    def test_log_psi_far_tail(self):
        # beyond the overflow switch only the log form is finite
        lp = A.log_psi(2000.0, 0.0, 0.5)
        assert lp == pytest.approx(2000.0 - math.log(2.0), rel=1e-14)

    def test_psi_domain(self):
        with pytest.raises(DomainError):
            A.psi(-1.0, 0.0, 0.5)
        with pytest.raises(DomainError):
            A.psi(1.0, 0.0, 0.0)

    def test_marginal_survival(self):
        assert A.exp_time_marginal_survival(0.5, 0.0, 1.0) == pytest.approx(1 / CH1, rel=1e-14)
        up = A.exp_time_marginal_survival(0.5, 0.0, 1.0, "increase")
        down = A.exp_time_marginal_survival(0.5, 0.0, 1.0, "decrease")
        assert up == down
        assert A.exp_time_marginal_survival(0.5, 0.3, 1e-12) == pytest.approx(1.0)
        assert A.exp_time_marginal_survival(0.5, 1.0, 1.0, "increase") == pytest.approx(1 / 1.304677973964021)

    def test_marginal_bad_side(self):
        with pytest.raises(DomainError):
            A.exp_time_marginal_survival(0.5, 0.0, 1.0, "sideways")


class TestHittingLaws:
    def test_unconstrained(self):
        assert A.hitting_dminus_cdf(0.0, 1.0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-14)
        assert A.hitting_dminus_cdf(0.0, 3.0, 6.0) == pytest.approx(A.hitting_dminus_cdf(0.0, 1.0, 2.0))
        assert A.hitting_dminus_cdf(0.5, 1.0, 1e6) == pytest.approx(1.0)

    def test_negative_drift_is_defective(self):
        mu, beta = -0.4, 1.5
        assert A.hitting_dminus_cdf(mu, beta, 1e6) == pytest.approx(math.exp(-2 * abs(mu) * beta), rel=1e-9)
        assert A.hitting_total_mass(mu, beta) == pytest.approx(math.exp(-1.2))

    def test_constrained_cases(self):
        assert A.hitting_dminus_constrained_cdf(0.0, 1.0, 1.0, 2.5) == pytest.approx(0.5)
        # both sides of u = alpha agree
        left = A.hitting_dminus_constrained_cdf(0.0, 1.0, 1.0, 1.0)
        right = A.hitting_dminus_constrained_cdf(0.0, 1.0, 1.0, 1.0 + 1e-12)
        assert left == pytest.approx(math.exp(-1.0), rel=1e-12)
        assert right == pytest.approx(math.exp(-1.0), rel=1e-10)

    def test_constrained_without_floor(self):
        for u in (0.3, 1.0, 4.0):
            assert A.hitting_dminus_constrained_cdf(0.2, math.inf, 1.0, u) == pytest.approx(
                A.hitting_dminus_cdf(0.2, 1.0, u), rel=1e-14
            )

    def test_joint_middle_case(self):
        assert A.hitting_joint_cdf(0.0, 1.0, 1.5, 2.0) == pytest.approx(math.exp(-1 / 3) / 1.5, rel=1e-13)

    def test_joint_limits(self):
        assert A.hitting_joint_cdf(0.0, 1.0, 50.0, 3.0) == pytest.approx(2.0 / 3.0)
        assert A.hitting_joint_cdf(0.3, 1.0, 0.7, 1e4) == pytest.approx(A.hitting_dminus_cdf(0.3, 1.0, 0.7), rel=1e-9)

    def test_joint_rejects_v_below_beta(self):
        with pytest.raises(DomainError):
            A.hitting_joint_cdf(0.0, 1.0, 0.5, 0.9)

    def test_bes3(self):
        assert A.bes3_dminus_cdf(0.0, 2.0, 2.0) == 1.0
        assert A.bes3_dminus_cdf(0.0, 2.0, 1.0) == pytest.approx(2 * math.exp(-1.0), rel=1e-14)
        assert A.bes3_dminus_cdf(0.0, 6.0, 3.0) == pytest.approx(A.bes3_dminus_cdf(0.0, 2.0, 1.0), rel=1e-14)

    def test_bes3_drifted_matches_printed_ratio(self):
        mu, beta, u = 0.8, 2.0, 0.7
        sm = lambda x: A.scale(-mu, x)  # noqa: E731
        printed = sm(beta) / sm(u) * math.exp(-(beta - u) / sm(u) - 2 * mu * (beta - u))
        assert A.bes3_dminus_cdf(mu, beta, u) == pytest.approx(printed, rel=1e-12)

    def test_bes3_domain(self):
        with pytest.raises(DomainError, match=r"u must lie in \(0, beta\]"):
            A.bes3_dminus_cdf(0.0, 1.0, 2.0)


class TestExponentialTimeJoint:
    def test_joint_cdf_against_quadrature(self):
        assert A.exp_time_joint_cdf(0.5, 0.7, 1.3) == pytest.approx(0.16989113086977629, rel=1e-12)
        assert A.exp_time_joint_cdf(2.0, 0.4, 0.9) == pytest.approx(0.22835831908630313, rel=1e-12)

    def test_joint_cdf_edges(self):
        c = 1.0
        assert A.exp_time_joint_cdf(0.5, 0.0, 2.0) == 0.0
        assert A.exp_time_joint_cdf(0.5, 1.0, math.inf) == pytest.approx(1 - 1 / math.cosh(c))
        assert A.exp_time_joint_cdf(0.5, 1.0, 1.0) == pytest.approx((CH1 - 1) / (CH1 + 1), rel=1e-14)

    def test_crossterm(self):
        assert A.exp_time_joint_survival_crossterm(0.5, 1.0, 1.0) == pytest.approx(
            (CH1 - 1) / (CH1 * (CH1 + 1)), rel=1e-14
        )
        assert A.exp_time_joint_survival_crossterm(0.5, 0.0, 2.0) == 0.0
        assert A.exp_time_joint_survival_crossterm(0.5, 0.5, 80.0) == pytest.approx(0.0, abs=1e-30)

    def test_crossterm_is_a_probability_statement(self):
        # P(D+ > a, D- < b) for a >= b computed as P(D- < b) - F(a, b)
        lam, a, b = 0.5, 1.4, 0.6
        direct = A.exp_time_dplus_cdf(lam, b) - A.exp_time_joint_cdf(lam, a, b)
        assert A.exp_time_joint_survival_crossterm(lam, a, b) == pytest.approx(direct, rel=1e-12)
        assert A.exp_time_cross_probability(lam, a, b) == pytest.approx(direct, rel=1e-12)

    def test_joint_survival(self):
        lam, a, b = 0.5, 0.6, 1.4
        inclusion = 1 - A.exp_time_dplus_cdf(lam, a) - A.exp_time_dplus_cdf(lam, b) + A.exp_time_joint_cdf(lam, a, b)
        assert A.exp_time_joint_survival(lam, a, b) == pytest.approx(inclusion, rel=1e-12)

    def test_density_values(self):
        assert A.exp_time_joint_density(0.5, 1.3, 0.7) == pytest.approx(0.20334695590054785, rel=1e-12)
        assert A.exp_time_joint_density(0.5, 0.7, 1.3) == A.exp_time_joint_density(0.5, 1.3, 0.7)
        assert A.exp_time_joint_density(0.5, 0.8, 0.8) == pytest.approx(2.0 / (math.cosh(0.8) + 1) ** 2, rel=1e-13)
        assert A.exp_time_joint_density(0.5, -1.0, 0.5) == 0.0

    def test_ordered_laws(self):
        assert A.ordered_joint_cdf(0.5, 1.3, 0.7) == pytest.approx(0.1133168774559944, rel=1e-13)
        assert A.ordered_joint_cdf(0.5, 0.7, 1.3) == pytest.approx(0.056574253413781893, rel=1e-13)
        assert A.ordered_dplus_cdf(0.5, 60.0) == pytest.approx(0.5)
        rec = A.exp_time_ordered_laws(0.5, 1.0, 1.0)
        assert rec.dplus_density == pytest.approx((CH1 - 1) ** 2 / math.sinh(1.0) ** 3, rel=1e-13)
        assert rec.dplus_cdf + rec.dminus_cdf == pytest.approx(1 - 1 / CH1, abs=1e-14)


class TestInfSup:
    def test_densities(self):
        assert A.inf_first_density(0.5, -0.8, 1.5) == pytest.approx(0.071439079101294651, rel=1e-12)
        lam, a, b = 0.5, -0.8, 1.5
        assert A.inf_sup_density(lam, a, b) == pytest.approx(
            lam * math.cosh(0.5 * (b + a)) / math.cosh(0.5 * (b - a)) ** 3, rel=1e-13
        )
        assert A.inf_sup_density(lam, a, b) == pytest.approx(A.inf_sup_density(lam, -b, -a), rel=1e-14)
        assert A.inf_density(lam, -0.5) == pytest.approx(math.exp(-0.5))
        assert A.inf_terminal_density(lam, -0.5, 0.2) == pytest.approx(math.exp(-1.2))
        assert A.inf_terminal_density(lam, -0.5, -0.6) == 0.0

    def test_hinf(self):
        assert A.hinf_cdf(0.5, 1.0) == pytest.approx(0.68268949213708589, rel=1e-13)
        assert A.hinf_density(0.5, 0.0) == 0.0

    def test_inf_sup_domain(self):
        with pytest.raises(DomainError):
            A.inf_sup_density(0.5, 0.1, 1.0)
        with pytest.raises(DomainError):
            A.inf_first_density(0.5, -0.1, -0.05)

    def test_segment_values(self):
        f1, f2, f3 = A.segment_dminus_cdfs(0.5, -0.8, 1.5, 1.2)
        assert f1 == pytest.approx(0.63093574990092057, rel=1e-12)
        assert f2 == pytest.approx(0.87415808477711284, rel=1e-12)
        assert f3 == pytest.approx(0.6567372532473613, rel=1e-12)

    def test_segment_endpoints(self):
        a, b = -0.8, 1.5
        assert A.segment1_cdf(0.5, b - a, a, b) == pytest.approx(1.0)
        assert A.segment2_cdf(0.5, b - a - 1e-12, a, b) == pytest.approx(1.0)
        assert A.segment3_cdf(0.5, b - a, a, b) == pytest.approx(1.0)
        assert A.segment1_cdf(0.5, 0.5, a, b) == 0.0
        assert A.segment2_cdf(0.5, -0.1, a, b) == 0.0

    def test_overshoot_printed_form(self):
        assert A.overshoot_density(0.5, -0.5, 0.5, 0.5) == pytest.approx(
            math.exp(-0.5) / (1 - math.exp(-1.0)), rel=1e-14
        )
        assert A.overshoot_density(0.5, -0.5, 0.5, 1.5) == 0.0
        assert A.overshoot_density(0.5, -40.0, 40.0, 0.3) == pytest.approx(math.exp(-0.3))

    def test_terminal_gap(self):
        assert A.terminal_gap_cdf(0.5, -0.8, 1.5, 0.9) == pytest.approx(0.71492802465438796, rel=1e-12)
        L = 2.3
        assert A.terminal_gap_density(0.5, -0.8, 1.5, 0.4) == pytest.approx(
            math.sinh(L - 0.4) / (math.cosh(L) - 1), rel=1e-13
        )
        assert A.terminal_gap_cdf(0.5, -0.8, 1.5, L) == pytest.approx(1.0)
        assert A.terminal_gap_density(0.5, -0.8, 1.5, 2.5) == 0.0

    def test_reduced(self):
        assert A.reduced_y_survival(1.0) == 1.0
        rec = A.reduced_xy_laws(0.5, 2.0)
        assert rec.joint_density == pytest.approx(2 * 2.5 / 9 * math.exp(-1.0))
        assert rec.y_density == pytest.approx(2 * 5 / 36)
        with pytest.raises(DomainError):
            A.reduced_xy_laws(0.5, 1.0)


class TestFixedTime:
    @pytest.mark.parametrize(
        "t, a, expected",
        [(1.0, 1.0, 0.62922257020047609), (0.5, 2.0, 0.0093554699620944886), (2.0, 0.5, 0.99993414399394561)],
    )
    def test_against_eigen_expansion(self, t, a, expected):
        r = A.fixed_time_dminus_survival(t, a)
        assert r.value == pytest.approx(expected, rel=1e-11)
        assert 0 <= r.abs_err_bound <= 1e-12
        assert math.exp(r.log_value) == pytest.approx(r.value, rel=1e-12)

    def test_limits(self):
        assert A.fixed_time_dminus_survival(1.0, 40.0).value == pytest.approx(0.0, abs=1e-300)
        assert A.fixed_time_dminus_survival(1e-6, 1.0).value == pytest.approx(0.0, abs=1e-300)

    def test_domain(self):
        with pytest.raises(DomainError):
            A.fixed_time_dminus_survival(0.0, 1.0)


class TestMoments:
    def test_catalan(self):
        assert A.dirichlet_beta(2) == pytest.approx(0.91596559417721902, abs=1e-15)

    def test_beta_one_and_three(self):
        assert A.dirichlet_beta(1) == pytest.approx(math.pi / 4, abs=1e-14)
        assert A.dirichlet_beta(3) == pytest.approx(math.pi**3 / 32, abs=1e-15)
        assert A.dirichlet_beta(3) == pytest.approx(0.96894614625936938, abs=1e-15)

    def test_record(self):
        m = A.moments_and_correlation()
        assert m.mean == pytest.approx(1.2533141373155003, abs=1e-15)
        assert m.second_moment == pytest.approx(1.831931188354438, abs=1e-14)
        assert m.cross_moment == pytest.approx(1.4456368272345474, abs=1e-14)
        assert m.variance == pytest.approx(0.26113486155954141, abs=1e-14)
        assert m.rho == pytest.approx(-0.47929065775774088, abs=1e-13)

    def test_dplus_moment(self):
        assert A.dplus_moment(1) == pytest.approx(math.sqrt(math.pi / 2), abs=1e-12)
        assert A.dplus_moment(2) == pytest.approx(2 * A.dirichlet_beta(2), abs=1e-12)
        assert A.dplus_moment(3) == pytest.approx(3.0924286813991433, rel=1e-13)
        with pytest.raises(DomainError):
            A.dplus_moment(0.5)

    def test_dplus_moment_matches_marginal_law(self):
        # E(D+_1)^p via E(D+_T)^p = E(T^{p/2}) E(D+_1)^p and the law 1 - sech
        from scipy import integrate, special

        p, lam = 2.5, 0.5
        tail = integrate.quad(lambda a: p * a ** (p - 1) * 2 * np.exp(-a) / (1 + np.exp(-2 * a)), 0, np.inf)[0]
        e_t = special.gamma(1 + p / 2) / lam ** (p / 2)
        assert A.dplus_moment(p) == pytest.approx(tail / e_t, rel=1e-9)
