"""Pointwise entropy functions: closed-form spot values, the ordering of the
three statistics, Fenchel-Young equality/inequality, and consistency of every
derivative with finite differences."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entromin import (
    DomainError,
    Entropy,
    entropy_conjugate,
    entropy_conjugate_derivative,
    entropy_derivative,
    entropy_value,
)

MB = Entropy.MAXWELL_BOLTZMANN
BE = Entropy.BOSE_EINSTEIN
FD = Entropy.FERMI_DIRAC

INF = math.inf


class TestValues:
    def test_sign_constants(self):
        assert BE.a == -1 and MB.a == 0 and FD.a == 1

    def test_mb_zero_convention(self):
        assert entropy_value(MB, 0.0) == 0.0

    def test_mb_at_one(self):
        assert entropy_value(MB, 1.0) == -1.0

    def test_fd_half(self):
        assert entropy_value(FD, 0.5) == pytest.approx(math.log(0.5), abs=1e-15)

    def test_be_negative_is_inf(self):
        assert entropy_value(BE, -0.1) == INF

    def test_fd_outside_unit_interval(self):
        assert entropy_value(FD, 1.5) == INF
        assert entropy_value(FD, 1.0) == 0.0
        assert entropy_value(FD, 0.0) == 0.0

    def test_be_zero(self):
        assert entropy_value(BE, 0.0) == 0.0


class TestConjugates:
    def test_mb(self):
        assert entropy_conjugate(MB, 0.0) == 1.0

    def test_fd(self):
        assert entropy_conjugate(FD, 0.0) == pytest.approx(math.log(2.0), abs=1e-15)

    def test_be_nonnegative_is_inf(self):
        assert entropy_conjugate(BE, 0.0) == INF
        assert entropy_conjugate(BE, 1.0) == INF

    def test_stability_large_arguments(self):
        # softplus must not overflow and must match its asymptotes
        assert entropy_conjugate(FD, 800.0) == pytest.approx(800.0, rel=1e-12)
        assert entropy_conjugate(FD, -745.0) == pytest.approx(math.exp(-745.0), rel=1e-10)
        assert entropy_conjugate(BE, -745.0) == pytest.approx(math.exp(-745.0), rel=1e-10)
        assert entropy_conjugate(MB, 1000.0) == INF


class TestConjugateDerivative:
    def test_mb(self):
        assert entropy_conjugate_derivative(MB, 0.0) == 1.0

    def test_fd(self):
        assert entropy_conjugate_derivative(FD, 0.0) == 0.5

    def test_be(self):
        assert entropy_conjugate_derivative(BE, -math.log(2.0)) == pytest.approx(1.0, abs=1e-14)

    def test_be_domain(self):
        with pytest.raises(DomainError):
            entropy_conjugate_derivative(BE, 0.0)


class TestDerivative:
    def test_mb(self):
        assert entropy_derivative(MB, 1.0) == 0.0

    def test_fd_symmetry(self):
        assert entropy_derivative(FD, 0.5) == 0.0

    def test_be(self):
        assert entropy_derivative(BE, 1.0) == pytest.approx(-math.log(2.0), abs=1e-15)

    @pytest.mark.parametrize(
        "kind,u",
        [(MB, 0.0), (MB, -1.0), (BE, 0.0), (FD, 0.0), (FD, 1.0), (FD, 2.0)],
    )
    def test_empty_subdifferential(self, kind, u):
        with pytest.raises(DomainError):
            entropy_derivative(kind, u)


def test_ordering_on_grid():
    # BE <= MB <= FD everywhere, including boundary and out-of-domain points
    grid = [-2.0, -0.5, 0.0, 1e-12, 0.3, 0.5, 0.999, 1.0, 1.5, 7.0, 100.0]
    for u in grid:
        be, mb, fd = (entropy_value(k, u) for k in (BE, MB, FD))
        assert be <= mb <= fd


@given(st.floats(1e-9, 50.0))
def test_fenchel_young_equality_mb_be(u):
    for kind in (MB, BE):
        t = entropy_derivative(kind, u)
        gap = entropy_value(kind, u) + entropy_conjugate(kind, t) - u * t
        assert abs(gap) <= 1e-10


@given(st.floats(1e-9, 1.0 - 1e-9))
def test_fenchel_young_equality_fd(u):
    t = entropy_derivative(FD, u)
    gap = entropy_value(FD, u) + entropy_conjugate(FD, t) - u * t
    assert abs(gap) <= 1e-10


@settings(max_examples=300)
@given(st.floats(0.0, 30.0), st.floats(-40.0, 10.0))
def test_fenchel_young_inequality(u, t):
    for kind in (MB, BE, FD):
        w = entropy_value(kind, u)
        ws = entropy_conjugate(kind, t)
        if math.isinf(w) or math.isinf(ws):
            continue
        assert w + ws - u * t >= -1e-12


@pytest.mark.parametrize("kind,t_lo,t_hi", [(MB, -5.0, 2.0), (FD, -5.0, 2.0), (BE, -5.0, -0.05)])
def test_conjugate_matches_grid_sup(kind, t_lo, t_hi):
    # sup_u (u t - W(u)) over a fine grid reproduces W* to grid resolution
    n = 40_000
    hi = 1.0 if kind is FD else 25.0
    for t in [t_lo, 0.5 * (t_lo + t_hi), t_hi]:
        best = -INF
        for i in range(n + 1):
            u = hi * i / n
            w = entropy_value(kind, u)
            if not math.isinf(w):
                best = max(best, u * t - w)
        assert best == pytest.approx(entropy_conjugate(kind, t), abs=1e-4)


@pytest.mark.parametrize("kind", [MB, BE, FD])
def test_derivative_matches_finite_differences(kind):
    h = 1e-5
    points = [0.2, 0.5, 0.8] if kind is FD else [0.2, 0.7, 1.5, 4.0]
    for u in points:
        fd_est = (entropy_value(kind, u + h) - entropy_value(kind, u - h)) / (2 * h)
        assert abs(entropy_derivative(kind, u) - fd_est) <= 1e-6


@pytest.mark.parametrize("kind,ts", [(MB, [-2.0, 0.5]), (FD, [-2.0, 0.5]), (BE, [-2.0, -0.3])])
def test_conjugate_derivative_matches_finite_differences(kind, ts):
    h = 1e-5
    for t in ts:
        fd_est = (entropy_conjugate(kind, t + h) - entropy_conjugate(kind, t - h)) / (2 * h)
        assert abs(entropy_conjugate_derivative(kind, t) - fd_est) <= 1e-6


@given(st.floats(1e-6, 20.0))
def test_inverse_gradient_identity_mb_be(u):
    for kind in (MB, BE):
        t = entropy_derivative(kind, u)
        assert entropy_conjugate_derivative(kind, t) == pytest.approx(u, rel=1e-10)


@given(st.floats(1e-6, 1.0 - 1e-6))
def test_inverse_gradient_identity_fd(u):
    t = entropy_derivative(FD, u)
    assert entropy_conjugate_derivative(FD, t) == pytest.approx(u, rel=1e-10)
