"""Sequence families: term generation, lattice enumeration, prefix
statistics, minimum-level sets, and — most importantly — soundness of every
certified tail bound against brute-force summation."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entromin import (
    Arithmetic,
    ConfigurationError,
    DomainError,
    ExplicitPrefix,
    ExplosiveWeights,
    Lattice3D,
    LogLevels,
    PowerLaw,
    ShiftedSigma,
    UnsupportedFamilyError,
    WeightedGeometric,
    generate,
    lattice_levels,
    prefix_stats,
    sigma_min_set,
    tail_bound,
)
from entromin.sequences import flipped

from conftest import brute_force_series, brute_force_tail, lattice_triples


class TestGenerate:
    def test_geometric(self, geometric):
        assert generate(geometric, 3) == (1.0, 3.0)

    def test_weighted_geometric_first(self, zeta_family):
        p, s = generate(zeta_family, 1)
        assert p == pytest.approx(math.e, rel=1e-15)
        assert s == 1.0

    def test_lattice_first(self, lattice):
        assert generate(lattice, 1) == (1.0, 3.0)

    def test_bad_index(self, geometric):
        with pytest.raises(DomainError):
            generate(geometric, 0)

    def test_determinism(self):
        a = WeightedGeometric(1.0, 3.0)
        b = WeightedGeometric(1.0, 3.0)
        for n in (1, 2, 17, 400):
            assert generate(a, n) == generate(b, n)


class TestLatticeLevels:
    def test_first_three(self):
        assert lattice_levels(1.0, 3) == [(1, 3.0), (3, 6.0), (3, 9.0)]

    def test_fifth_level(self):
        assert lattice_levels(1.0, 5)[4] == (1, 12.0)

    def test_scaled(self):
        assert lattice_levels(2.0, 1) == [(1, 6.0)]

    def test_degeneracy_conservation(self):
        # total degeneracy up to L equals the number of triples with sum <= L
        table = lattice_triples(200)
        levels = lattice_levels(1.0, len(table))
        assert [int(v) for _, v in levels] == sorted(table)
        assert sum(d for d, _ in levels) == sum(table.values())

    def test_bad_args(self):
        with pytest.raises(DomainError):
            lattice_levels(1.0, 0)
        with pytest.raises(DomainError):
            lattice_levels(-1.0, 3)


class TestPrefixStats:
    def test_geometric(self, geometric):
        st_ = prefix_stats(geometric, 4)
        assert (st_.rho_n, st_.eta1_n, st_.eta2_n) == (4.0, 1.0, 4.0)

    def test_lattice(self, lattice):
        st_ = prefix_stats(lattice, 2)
        assert (st_.rho_n, st_.eta1_n, st_.eta2_n) == (4.0, 3.0, 6.0)

    def test_weighted_geometric(self, zeta_family):
        st_ = prefix_stats(zeta_family, 2)
        assert st_.rho_n == pytest.approx(math.e + math.e**2 / 8.0, rel=1e-14)

    def test_monotonicity(self, lattice):
        prev = prefix_stats(lattice, 1)
        for n in range(2, 30):
            cur = prefix_stats(lattice, n)
            assert cur.rho_n > prev.rho_n
            assert cur.eta1_n <= prev.eta1_n
            assert cur.eta2_n >= prev.eta2_n
            prev = cur


class TestSigmaMinSet:
    def test_geometric(self, geometric):
        smin = sigma_min_set(geometric)
        assert (smin.theta1, smin.indices, smin.p_sum) == (1.0, (1,), 1.0)

    def test_explicit_prefix_with_tie(self):
        fam = ExplicitPrefix((1.0, 1.0, 1.0, 1.0), (2.0, 2.0, 5.0, 6.0), Arithmetic(2.0, 1.0))
        smin = sigma_min_set(fam)
        assert smin.theta1 == 2.0
        assert smin.indices == (1, 2)
        assert smin.p_sum == 2.0

    def test_lattice(self, lattice):
        smin = sigma_min_set(lattice)
        assert (smin.theta1, smin.indices, smin.p_sum) == (3.0, (1,), 1.0)

    def test_rejects_decreasing_levels(self):
        with pytest.raises(UnsupportedFamilyError):
            sigma_min_set(Arithmetic(0.0, -1.0))

    def test_rejects_constant(self):
        with pytest.raises(UnsupportedFamilyError):
            sigma_min_set(Arithmetic(5.0, 0.0))


class TestTailBound:
    def test_geometric_matches_exact_tail(self, geometric):
        # sum_{n>10} 2^-n = 2^-10; the ratio bound is tight here
        assert tail_bound(geometric, -math.log(2.0), 10) == pytest.approx(2.0**-10, rel=1e-12)

    def test_vanishes_with_n(self, geometric):
        bounds = [tail_bound(geometric, -math.log(2.0), n) for n in (10, 20, 40, 80)]
        assert all(b is not None for b in bounds)
        assert bounds[-1] < 1e-22 and all(b1 > b2 for b1, b2 in zip(bounds, bounds[1:]))

    def test_weighted_geometric_sound(self, zeta_family):
        bound = tail_bound(zeta_family, -1.5, 20)
        brute, _ = brute_force_tail(zeta_family, -1.5, 20, 100_000)
        assert bound is not None and brute <= bound

    def test_domain_error_outside(self, zeta_family):
        with pytest.raises(DomainError):
            tail_bound(zeta_family, -0.5, 10)

    def test_unavailable_for_log_levels(self):
        # spacing decays to zero: no uniform ratio certificate exists
        assert tail_bound(LogLevels(1.0), -2.0, 50) is None


_FAMILY_POINTS = [
    (Arithmetic(0.0, 1.0), -0.05),
    (Arithmetic(3.0, 0.5), -0.4),
    (PowerLaw(1.0, 2.0), -0.01),
    (PowerLaw(0.7, 0.5), -0.8),
    (LogLevels(1.0), -1.8),
    (WeightedGeometric(1.0, 3.0), -1.2),
    (WeightedGeometric(1.0, 3.0), -1.0 - 1e-9),
    (WeightedGeometric(2.0, 0.5), -2.3),
    (Lattice3D(1.0), -0.3),
    (Lattice3D(0.25), -1.1),
    (ExplicitPrefix((2.0, 1.5), (0.7, 0.9), Arithmetic(0.0, 1.0)), -0.2),
    (ShiftedSigma(Arithmetic(-4.0, 1.0), -5.0), -0.15),
]


@pytest.mark.parametrize("family,y", _FAMILY_POINTS)
@pytest.mark.parametrize("moment", [0, 1, 2])
def test_tail_interval_brackets_brute_force(family, y, moment):
    # every certified (lo, hi) must bracket the brute-force tail sum; when
    # the brute horizon has not converged it still bounds the tail below,
    # so only the upper certificate can be checked
    for n in (70, 300):
        iv = family.tail_interval(y, n, moment)
        if iv is None:
            continue
        lo, hi = iv
        assert 0.0 <= lo <= hi
        tail, converged = brute_force_tail(family, y, n, 100_000, moment)
        assert tail <= hi * (1 + 1e-12) + 1e-300
        if converged:
            assert lo <= tail * (1 + 1e-12) + 1e-300


def test_boundary_brackets_sound(zeta_family):
    # boundary tails are zeta tails: check against long partial sums
    for moment in (0, 1):
        lo, hi = zeta_family.boundary_bracket(50, moment)
        tail = math.fsum(n ** (moment - 3.0) for n in range(51, 400_000))
        assert lo <= tail <= hi


def test_boundary_divergence_flags(case_b_family, zeta_family):
    assert case_b_family.boundary_divergent(0) is False
    assert case_b_family.boundary_divergent(1) is True
    assert zeta_family.boundary_divergent(0) is False
    assert zeta_family.boundary_divergent(1) is False
    assert LogLevels(1.0).boundary_divergent(0) is True
    assert Arithmetic(0.0, 1.0).boundary_divergent(0) is True


class TestConstruction:
    def test_explicit_weight_below_one(self):
        with pytest.raises(ConfigurationError):
            ExplicitPrefix((0.5, 1.0), (1.0, 2.0), Arithmetic(0.0, 1.0))

    def test_explicit_length_mismatch(self):
        with pytest.raises(ConfigurationError):
            ExplicitPrefix((1.0,), (1.0, 2.0), Arithmetic(0.0, 1.0))

    def test_weighted_geometric_needs_positive_rate(self):
        with pytest.raises(ConfigurationError):
            WeightedGeometric(0.0, 3.0)

    def test_power_law_needs_positive_exponent(self):
        with pytest.raises(ConfigurationError):
            PowerLaw(1.0, 0.0)

    def test_shift_must_lie_below_levels(self):
        with pytest.raises(ConfigurationError):
            ShiftedSigma(Arithmetic(0.0, 1.0), 2.0)

    def test_explosive_is_declared_divergent(self):
        fam = ExplosiveWeights()
        assert fam.dom_f_empty and math.isinf(fam.alpha)


def test_flip_reverses_direction():
    fam = Arithmetic(0.0, -1.0)
    assert fam.sigma_direction == -1
    flip = flipped(fam)
    assert flip.sigma_direction == +1
    assert flip.sigma(4) == -fam.sigma(4)


def test_shifted_terms_and_alpha(zeta_family):
    sh = ShiftedSigma(zeta_family, -2.0)
    assert sh.sigma(5) == zeta_family.sigma(5) + 2.0
    assert sh.p(5) == zeta_family.p(5)
    assert sh.alpha == zeta_family.alpha


@settings(max_examples=25, deadline=None)
@given(st.floats(-3.0, -0.02), st.integers(64, 400))
def test_arithmetic_moment_tails_are_exact(y, n):
    fam = Arithmetic(0.5, 1.0)
    for k in (0, 1, 2):
        lo, hi = fam.tail_interval(y, n, k)
        assert hi - lo <= 1e-12 * max(1.0, hi)
        brute, _ = brute_force_tail(fam, y, n, 5000, k)
        assert brute == pytest.approx(hi, rel=1e-9, abs=1e-300)
