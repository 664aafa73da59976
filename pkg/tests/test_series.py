"""Partition series analysis: certified values of f and its derivatives,
endpoint profiles, the slope bijection and its inverse, the conjugate of
ln f, and the dual sums h_W with gradients and boundary subdifferentials."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entromin import (
    Arithmetic,
    BoundaryCase,
    ConfigurationError,
    DivergenceError,
    DomainError,
    Entropy,
    LogLevels,
    RangeError,
    boundary_subdifferential,
    estimate_alpha,
    eval_f,
    eval_f_derivatives,
    eval_h,
    grad_h,
    lnf_conjugate,
    phi,
    phi_inverse,
    profile,
)
from entromin.series import hessian_h

from conftest import LN2, ZETA2, ZETA3, zeta_oracle

MB = Entropy.MAXWELL_BOLTZMANN
BE = Entropy.BOSE_EINSTEIN
FD = Entropy.FERMI_DIRAC

# independent oracle value of sum_{n>=1} -ln(1 - 2^-n)
BE_H_AT_0_LN2 = 1.2420620948124146


def test_zeta_reference_constants_match_oracle():
    assert zeta_oracle(3.0) == pytest.approx(ZETA3, abs=1e-13)
    assert zeta_oracle(2.0) == pytest.approx(ZETA2, abs=1e-10)
    assert ZETA2 == pytest.approx(math.pi**2 / 6.0, abs=1e-15)


class TestEvalF:
    def test_geometric_closed_form(self, geometric):
        r = eval_f(geometric, -LN2, 1e-12)
        assert r.value == pytest.approx(1.0, abs=1e-12)
        assert r.tail_bound_used <= 1e-12

    def test_geometric_third(self, geometric):
        assert eval_f(geometric, -math.log(3.0), 1e-12).value == pytest.approx(0.5, abs=1e-12)

    def test_zeta_value(self, zeta_family):
        assert eval_f(zeta_family, -1.0, 1e-10).value == pytest.approx(
            zeta_oracle(3.0), abs=1e-10
        )

    def test_divergence_beyond_endpoint(self, zeta_family):
        with pytest.raises(DivergenceError):
            eval_f(zeta_family, -0.5, 1e-10)

    def test_divergence_at_open_boundary(self, geometric):
        with pytest.raises(DivergenceError):
            eval_f(geometric, 0.0, 1e-10)

    def test_boundary_rejected_for_log_levels(self):
        # f(-alpha) is a harmonic series: certified divergent
        with pytest.raises(DivergenceError):
            eval_f(LogLevels(1.0), -1.0, 1e-8)

    def test_case_b_boundary_value(self, case_b_family):
        got = eval_f(case_b_family, -1.0, 1e-8).value
        assert got == pytest.approx(zeta_oracle(1.5, 2_000_000), abs=1e-8)


class TestDerivatives:
    def test_geometric(self, geometric):
        f0, f1, f2 = eval_f_derivatives(geometric, -LN2, 1e-12)
        assert f0 == pytest.approx(1.0, abs=1e-12)
        assert f1 == pytest.approx(2.0, abs=1e-12)
        assert f2 == pytest.approx(6.0, abs=1e-12)

    def test_all_vanish_far_left(self, geometric):
        f0, f1, f2 = eval_f_derivatives(geometric, -30.0, 1e-14)
        assert max(f0, f1, f2) < 1e-11

    def test_zeta_first_derivative_vs_brute_force(self, zeta_family):
        y = -1.05
        _, f1, _ = eval_f_derivatives(zeta_family, y, 1e-10)
        brute = math.fsum(n ** -2.0 * math.exp((y + 1.0) * n) for n in range(1, 200_000))
        assert f1 == pytest.approx(brute, abs=1e-9)

    def test_interior_only(self, zeta_family):
        with pytest.raises(DomainError):
            eval_f_derivatives(zeta_family, -1.0, 1e-8)


class TestProfile:
    def test_geometric(self, geometric):
        prof = profile(geometric)
        assert prof.alpha == 0.0
        assert prof.boundary_case is BoundaryCase.OPEN_A
        assert prof.theta1 == 1.0
        assert math.isinf(prof.theta2)
        assert not prof.alpha_estimated

    def test_zeta(self, zeta_family):
        prof = profile(zeta_family)
        assert prof.alpha == 1.0
        assert prof.boundary_case is BoundaryCase.CLOSED_GAMMA_FINITE_C
        assert prof.f_at_boundary == pytest.approx(ZETA3, abs=1e-10)
        assert prof.gamma == pytest.approx(ZETA2, abs=1e-10)
        assert prof.theta2 == pytest.approx(ZETA2 / ZETA3, abs=1e-9)

    def test_log_levels_boundary_is_open(self):
        # f(-alpha) diverges (harmonic), so dom f is open and theta2 = inf
        prof = profile(LogLevels(1.0))
        assert prof.alpha == 1.0
        assert prof.boundary_case is BoundaryCase.OPEN_A
        assert math.isinf(prof.theta2)

    def test_case_b(self, case_b_family):
        prof = profile(case_b_family)
        assert prof.boundary_case is BoundaryCase.CLOSED_GAMMA_INFINITE_B
        assert prof.f_at_boundary is not None and prof.gamma is None
        assert math.isinf(prof.theta2)

    def test_lattice(self, lattice):
        prof = profile(lattice)
        assert prof.alpha == 0.0
        assert prof.theta1 == 3.0
        assert prof.boundary_case is BoundaryCase.OPEN_A

    def test_alpha_estimator_is_consistent(self, zeta_family, geometric):
        assert estimate_alpha(zeta_family) == pytest.approx(1.0, abs=1e-2)
        assert estimate_alpha(geometric) == pytest.approx(0.0, abs=1e-12)


class TestPhi:
    def test_values(self, geometric):
        assert phi(geometric, -LN2, 1e-12) == pytest.approx(2.0, abs=1e-11)
        assert phi(geometric, -math.log(3.0), 1e-12) == pytest.approx(1.5, abs=1e-11)

    def test_limit_is_theta1(self, geometric):
        assert phi(geometric, -25.0, 1e-13) == pytest.approx(1.0, abs=1e-9)

    def test_domain(self, geometric):
        with pytest.raises(DomainError):
            phi(geometric, 0.5, 1e-10)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-8.0, -0.05), st.floats(0.01, 3.0))
    def test_strictly_increasing(self, geometric, y, gap):
        assert phi(geometric, y, 1e-12) < phi(geometric, y + min(gap, -y / 2), 1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(-6.0, -1.001))
    def test_range_and_roundtrip(self, zeta_family, y):
        prof = profile(zeta_family)
        w = phi(zeta_family, y, 1e-11)
        assert prof.theta1 < w < prof.theta2
        back = phi_inverse(zeta_family, w, 1e-11)
        assert abs(phi(zeta_family, back, 1e-12) - w) <= 1e-10


class TestPhiInverse:
    def test_analytic_inverse(self, geometric):
        assert phi_inverse(geometric, 2.0, 1e-12) == pytest.approx(-LN2, abs=1e-11)
        assert phi_inverse(geometric, 1.5, 1e-12) == pytest.approx(-math.log(3.0), abs=1e-11)

    def test_out_of_range(self, geometric):
        with pytest.raises(RangeError):
            phi_inverse(geometric, 0.5, 1e-10)
        with pytest.raises(RangeError):
            phi_inverse(geometric, 1.0, 1e-10)

    def test_beyond_theta2_rejected(self, zeta_family):
        prof = profile(zeta_family)
        with pytest.raises(RangeError):
            phi_inverse(zeta_family, prof.theta2 + 0.01, 1e-10)

    def test_monotone_in_w(self, zeta_family):
        ws = [1.05, 1.15, 1.25, 1.35]
        ys = [phi_inverse(zeta_family, w, 1e-11) for w in ws]
        assert all(a < b for a, b in zip(ys, ys[1:]))


class TestLnfConjugate:
    def test_at_theta1(self, geometric):
        assert lnf_conjugate(geometric, 1.0, 1e-12) == 0.0

    def test_interior(self, geometric):
        assert lnf_conjugate(geometric, 2.0, 1e-12) == pytest.approx(-2 * LN2, abs=1e-11)

    def test_below_theta1(self, geometric):
        assert math.isinf(lnf_conjugate(geometric, 0.5, 1e-10))

    def test_beyond_theta2(self, zeta_family):
        got = lnf_conjugate(zeta_family, 2.0, 1e-10)
        assert got == pytest.approx(-2.0 - math.log(ZETA3), abs=1e-9)

    def test_right_continuity_at_theta1(self, geometric):
        branch = lnf_conjugate(geometric, 1.0, 1e-12)
        near = lnf_conjugate(geometric, 1.0 + 1e-8, 1e-12)
        assert abs(near - branch) <= 1e-5

    def test_continuity_at_theta2(self, zeta_family):
        # approaching theta2 from inside, the interior branch meets the
        # affine branch with slope -alpha (C^1 fit, second order remainder)
        prof = profile(zeta_family)
        step = 1e-4
        at = lnf_conjugate(zeta_family, prof.theta2, 1e-11)
        below = lnf_conjugate(zeta_family, prof.theta2 - step, 1e-11)
        assert abs(at - below) <= 1.01 * prof.alpha * step
        assert abs(at - below + prof.alpha * step) <= 1e-7

    @settings(max_examples=25, deadline=None)
    @given(st.floats(-5.0, -0.1), st.floats(-5.0, -0.1), st.floats(0.05, 0.95))
    def test_lnf_convexity(self, geometric, y1, y2, lam):
        mid = lam * y1 + (1 - lam) * y2
        lf = lambda y: math.log(eval_f(geometric, y, 1e-13).value)
        assert lf(mid) <= lam * lf(y1) + (1 - lam) * lf(y2) + 1e-10


class TestEvalH:
    def test_mb_factorizes(self, geometric):
        assert eval_h(geometric, MB, 0.0, -LN2, 1e-12) == pytest.approx(1.0, abs=1e-12)
        assert eval_h(geometric, MB, math.log(3.0), -LN2, 1e-11) == pytest.approx(
            3.0, abs=1e-10
        )

    def test_be_value(self, geometric):
        got = eval_h(geometric, BE, 0.0, -LN2, 1e-12)
        assert got == pytest.approx(BE_H_AT_0_LN2, abs=1e-11)

    def test_fd_outside_dom_f(self, geometric):
        assert math.isinf(eval_h(geometric, FD, 5.0, 0.0, 1e-10))

    def test_be_dom_condition(self, geometric):
        # x + theta1 y >= 0 puts the point outside dom h_BE
        assert math.isinf(eval_h(geometric, BE, 1.0, -1.0, 1e-10))

    @settings(max_examples=20, deadline=None)
    @given(st.floats(-2.0, 2.0), st.floats(-4.0, -0.1))
    def test_mb_factorization_property(self, geometric, x, y):
        lhs = eval_h(geometric, MB, x, y, 1e-11)
        rhs = math.exp(x) * eval_f(geometric, y, 1e-12).value
        assert lhs == pytest.approx(rhs, rel=1e-9)


class TestGradH:
    def test_mb_values(self, geometric):
        assert grad_h(geometric, MB, 0.0, -LN2, 1e-11) == pytest.approx((1.0, 2.0), abs=1e-10)
        assert grad_h(geometric, MB, math.log(3.0), -LN2, 1e-10) == pytest.approx(
            (3.0, 6.0), abs=1e-9
        )

    def test_zeta_identities(self, zeta_family):
        u, v = grad_h(zeta_family, MB, 0.0, -1.0, 1e-9)
        assert u == pytest.approx(ZETA3, abs=1e-9)
        assert v == pytest.approx(ZETA2, abs=1e-9)

    def test_domain_error_outside(self, zeta_family):
        with pytest.raises(DomainError):
            grad_h(zeta_family, MB, 0.0, -0.5, 1e-9)

    def test_case_b_boundary_gradient_diverges(self, case_b_family):
        with pytest.raises(DomainError):
            grad_h(case_b_family, MB, 0.0, -1.0, 1e-9)

    @pytest.mark.parametrize("kind,x", [(MB, 0.3), (FD, 0.3), (BE, -0.2)])
    def test_matches_finite_differences(self, geometric, kind, x):
        y, h = -0.9, 1e-5
        gu, gv = grad_h(geometric, kind, x, y, 1e-12)
        du = (eval_h(geometric, kind, x + h, y, 1e-13) - eval_h(geometric, kind, x - h, y, 1e-13)) / (2 * h)
        dv = (eval_h(geometric, kind, x, y + h, 1e-13) - eval_h(geometric, kind, x, y - h, 1e-13)) / (2 * h)
        assert abs(gu - du) <= 1e-5 and abs(gv - dv) <= 1e-5

    @pytest.mark.parametrize("kind", [MB, BE, FD])
    def test_hessian_matches_grad_differences(self, geometric, kind):
        x, y, h = -0.5, -1.1, 1e-5
        h00, h01, h11 = hessian_h(geometric, kind, x, y, 1e-12)
        gux_p = grad_h(geometric, kind, x + h, y, 1e-13)
        gux_m = grad_h(geometric, kind, x - h, y, 1e-13)
        guy_p = grad_h(geometric, kind, x, y + h, 1e-13)
        guy_m = grad_h(geometric, kind, x, y - h, 1e-13)
        assert abs((gux_p[0] - gux_m[0]) / (2 * h) - h00) <= 1e-5
        assert abs((guy_p[0] - guy_m[0]) / (2 * h) - h01) <= 1e-5
        assert abs((guy_p[1] - guy_m[1]) / (2 * h) - h11) <= 1e-5


class TestBoundarySubdifferential:
    def test_zeta_at_origin_multiplier(self, zeta_family):
        half = boundary_subdifferential(zeta_family, MB, 0.0, 1e-10)
        assert half.u == pytest.approx(ZETA3, abs=1e-9)
        assert half.v_min == pytest.approx(ZETA2, abs=1e-9)

    def test_scaling_in_x(self, zeta_family):
        half = boundary_subdifferential(zeta_family, MB, math.log(2.0), 1e-10)
        assert half.u == pytest.approx(2 * ZETA3, abs=1e-8)
        assert half.v_min == pytest.approx(2 * ZETA2, abs=1e-8)

    def test_case_b_is_empty(self, case_b_family):
        assert boundary_subdifferential(case_b_family, MB, 0.0, 1e-9) is None

    def test_case_a_precondition(self, geometric):
        with pytest.raises(DomainError):
            boundary_subdifferential(geometric, MB, 0.0, 1e-9)

    def test_be_needs_domain(self, zeta_family):
        # x - theta1 alpha >= 0 lies outside dom h_BE
        with pytest.raises(DomainError):
            boundary_subdifferential(zeta_family, BE, 2.0, 1e-9)
