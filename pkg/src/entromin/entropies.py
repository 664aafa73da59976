"""Pointwise entropies of ideal-gas statistics and their convex conjugates.

The three integrands are

    bose-einstein      u ln u - (1+u) ln(1+u)      on [0, inf)
    maxwell-boltzmann  u (ln u - 1)                on [0, inf)
    fermi-dirac        u ln u + (1-u) ln(1-u)      on [0, 1]

with 0 ln 0 := 0 and value +inf outside the stated domains, so callers can
form countable sums without special-casing.  Conjugates are exp(t),
log(1+exp(t)) and -log(1-exp(t)) (the latter finite only for t < 0), all
evaluated in overflow-safe branch-split form.  Derivative queries outside
the open domain interior raise DomainError: the subdifferential is empty
there, reporting a fake +/-inf slope would be wrong.

All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from enum import Enum

from .errors import DomainError

__all__ = [
    "Entropy",
    "entropy_value",
    "entropy_conjugate",
    "entropy_conjugate_derivative",
    "entropy_derivative",
]

_INF = math.inf

# exp(t) overflows float64 beyond this
_EXP_OVERFLOW = 709.0


class Entropy(Enum):
    """Which of the three statistics; `a` is the sign constant in
    (W*)'(t) = exp(t) / (1 + a exp(t))."""

    BOSE_EINSTEIN = "be"
    MAXWELL_BOLTZMANN = "mb"
    FERMI_DIRAC = "fd"

    @property
    def a(self) -> int:
        return _A_CONST[self]


_A_CONST = {
    Entropy.BOSE_EINSTEIN: -1,
    Entropy.MAXWELL_BOLTZMANN: 0,
    Entropy.FERMI_DIRAC: 1,
}


def _xlogx(u: float) -> float:
    return 0.0 if u == 0.0 else u * math.log(u)


def entropy_value(kind: Entropy, u: float) -> float:
    """W(u), total on the reals; +inf encodes 'outside dom W'."""
    if u < 0.0 or math.isnan(u):
        return _INF
    if kind is Entropy.MAXWELL_BOLTZMANN:
        return _INF if math.isinf(u) else _xlogx(u) - u
    if kind is Entropy.BOSE_EINSTEIN:
        if math.isinf(u):
            return -_INF
        return _xlogx(u) - _xlogx(1.0 + u)
    if u > 1.0:
        return _INF
    return _xlogx(u) + _xlogx(1.0 - u)


def entropy_conjugate(kind: Entropy, t: float) -> float:
    """W*(t) = sup_u (u t - W(u)), in log1p-stable form."""
    if kind is Entropy.MAXWELL_BOLTZMANN:
        return _INF if t > _EXP_OVERFLOW else math.exp(t)
    if kind is Entropy.FERMI_DIRAC:
        # softplus
        if t > 0.0:
            return t + math.log1p(math.exp(-t))
        return math.log1p(math.exp(t))
    # bose-einstein: finite only for t < 0
    if t >= 0.0:
        return _INF
    z = math.exp(t)
    if z >= 1.0:  # t just below 0 can round exp(t) to 1.0
        return _INF
    return -math.log1p(-z)


def entropy_conjugate_derivative(kind: Entropy, t: float) -> float:
    """(W*)'(t) = exp(t) / (1 + a exp(t)); requires t in dom W*."""
    if kind is Entropy.MAXWELL_BOLTZMANN:
        return _INF if t > _EXP_OVERFLOW else math.exp(t)
    if kind is Entropy.FERMI_DIRAC:
        if t >= 0.0:
            return 1.0 / (1.0 + math.exp(-t))
        z = math.exp(t)
        return z / (1.0 + z)
    if t >= 0.0:
        raise DomainError(f"bose-einstein conjugate requires t < 0, got {t}")
    # exp(t)/(1-exp(t)) = 1/(exp(-t)-1), exact for t near 0 via expm1
    return 1.0 / math.expm1(-t)


def entropy_derivative(kind: Entropy, u: float) -> float:
    """W'(u) on the interior of dom W; DomainError elsewhere."""
    if kind is Entropy.MAXWELL_BOLTZMANN:
        if u <= 0.0:
            raise DomainError(f"maxwell-boltzmann derivative requires u > 0, got {u}")
        return math.log(u)
    if kind is Entropy.BOSE_EINSTEIN:
        if u <= 0.0:
            raise DomainError(f"bose-einstein derivative requires u > 0, got {u}")
        return math.log(u) - math.log1p(u)
    if not 0.0 < u < 1.0:
        raise DomainError(f"fermi-dirac derivative requires 0 < u < 1, got {u}")
    return math.log(u) - math.log1p(-u)
