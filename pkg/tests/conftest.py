"""Shared fixtures and independent oracles for the test suite.

The oracles here are deliberately primitive (brute-force sums, integral
brackets, finite differences) and never call the code paths they check.
"""

from __future__ import annotations

import math

import pytest

from entromin import Arithmetic, Lattice3D, WeightedGeometric

# -- frozen reference constants (computed by the oracles below) -------------

LN2 = math.log(2.0)
ZETA3 = zeta_ref = 1.2020569031595942  # checked against zeta_oracle in tests
ZETA2 = 1.6449340668482264


def zeta_oracle(s: float, n: int = 200_000) -> float:
    """Partial sum plus integral-bracket midpoint for sum k^-s, s > 1."""
    partial = math.fsum(k ** -s for k in range(1, n + 1))
    lo = (n + 1) ** (1.0 - s) / (s - 1.0)
    hi = n ** (1.0 - s) / (s - 1.0)
    return partial + 0.5 * (lo + hi)


def brute_force_series(family, y: float, n_terms: int, moment: int = 0) -> float:
    """Plain partial sum of p_n sigma_n^k exp(sigma_n y)."""
    return math.fsum(
        math.exp(family.log_p(n) + family.sigma(n) * y) * family.sigma(n) ** moment
        for n in range(1, n_terms + 1)
    )


def brute_force_tail(family, y: float, n: int, horizon: int, moment: int = 0) -> tuple[float, bool]:
    """Direct sum of terms n+1 .. n+horizon and whether it visibly converged
    (the last term is negligible against the accumulated sum)."""
    terms = [
        math.exp(family.log_p(k) + family.sigma(k) * y) * family.sigma(k) ** moment
        for k in range(n + 1, n + horizon + 1)
    ]
    total = math.fsum(terms)
    converged = terms[-1] <= 1e-18 * max(total, 1e-300)
    return total, converged


def lattice_triples(limit: int) -> dict[int, int]:
    """Degeneracy table of i^2+j^2+k^2 <= limit by exhaustive enumeration."""
    counts: dict[int, int] = {}
    m = math.isqrt(limit) + 1
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            for k in range(1, m + 1):
                v = i * i + j * j + k * k
                if v <= limit:
                    counts[v] = counts.get(v, 0) + 1
    return counts


@pytest.fixture(scope="session")
def geometric():
    """Unit weights, sigma_n = n."""
    return Arithmetic(0.0, 1.0)


@pytest.fixture(scope="session")
def zeta_family():
    """p_n = e^n / n^3, sigma_n = n: boundary case (c) with finite theta2."""
    return WeightedGeometric(1.0, 3.0)


@pytest.fixture(scope="session")
def case_b_family():
    """p_n = e^n / n^1.5: f(-1) finite but the derivative series diverges."""
    return WeightedGeometric(1.0, 1.5)


@pytest.fixture(scope="session")
def lattice():
    return Lattice3D(1.0)
