"""Certified analysis of f(y) = sum p_n exp(sigma_n y) and of the dual sums
h_W(x, y) = sum p_n W*(x + sigma_n y).

Everything here carries a certificate: series values come with two-sided
tail brackets from the family's metadata, divergence is only ever declared
when proved (ratio >= 1 persists, integral minorant, or terms bounded away
from zero), and profiles record which of the three endpoint regimes holds:

  (a) dom f open at -alpha,
  (b) closed with divergent derivative series (gamma = inf),
  (c) closed with gamma < inf, the only case with a finite slope bound
      theta2 = gamma / f(-alpha).

The increasing bijection phi = f'/f : (-inf, -alpha) -> (theta1, theta2) is
inverted by bracketed root finding; the conjugate of ln f follows its
four-branch closed form.  All tolerances are absolute unless noted.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .entropies import Entropy
from .errors import (
    BudgetError,
    ConfigurationError,
    DivergenceError,
    DomainError,
    RangeError,
    UncertifiedError,
    UnsupportedFamilyError,
)
from .rootfind import solve_bracketed
from .sequences import SequenceFamily, SigmaMinSet, sigma_min_set

__all__ = [
    "BoundaryCase",
    "SeriesProfile",
    "SeriesEval",
    "HalfLine",
    "eval_f",
    "eval_f_derivatives",
    "profile",
    "estimate_alpha",
    "phi",
    "phi_inverse",
    "lnf_conjugate",
    "eval_h",
    "grad_h",
    "hessian_h",
    "boundary_subdifferential",
]

_TERM_BUDGET = 2**23
_START_BLOCK = 64


class BoundaryCase(Enum):
    OPEN_A = "a"
    CLOSED_GAMMA_INFINITE_B = "b"
    CLOSED_GAMMA_FINITE_C = "c"


@dataclass(frozen=True)
class SeriesEval:
    """A certified series value: |value - exact| <= tail_bound_used."""

    value: float
    truncation_n: int
    tail_bound_used: float


@dataclass(frozen=True)
class SeriesProfile:
    """Analytic profile of f for one family.

    theta2 is finite exactly in boundary case (c), where it equals
    gamma / f(-alpha); f_at_boundary and gamma are None when not finite.
    """

    alpha: float
    boundary_case: BoundaryCase
    f_at_boundary: Optional[float]
    gamma: Optional[float]
    theta1: float
    theta2: float
    sigma_min: SigmaMinSet
    alpha_estimated: bool = False

    def __post_init__(self):
        finite_t2 = math.isfinite(self.theta2)
        if finite_t2 != (self.boundary_case is BoundaryCase.CLOSED_GAMMA_FINITE_C):
            raise ConfigurationError("theta2 finite iff boundary case (c)")
        if not self.theta1 < self.theta2:
            raise ConfigurationError(
                f"theta1={self.theta1} must lie below theta2={self.theta2}"
            )


@dataclass(frozen=True)
class HalfLine:
    """The vertical half-line {u} x [v_min, inf) in the (u, v) plane."""

    u: float
    v_min: float


# ---------------------------------------------------------------------------
# core summation with certified tails


def _eval_many(family, y, tols, moments, *, boundary=False, budget=_TERM_BUDGET):
    """Partial sums of p_n sigma_n^k exp(sigma_n y) for each k in `moments`,
    stopped when every tail bracket is narrower than its tolerance.

    Gives up early when a certified width shrinks too slowly to reach its
    tolerance within the term budget even at cubic decay: paying the whole
    budget just to fail made tolerance-ladder fallbacks prohibitively slow.
    """
    sums = {k: [] for k in moments}
    lo, hi = 1, _START_BLOCK
    while True:
        logt = family.log_terms(y, lo, hi)
        sig = family.sigma_array(lo, hi)
        base = np.exp(logt)
        for k in moments:
            block = base if k == 0 else base * sig**k
            sums[k].append(float(block.sum()))
        brackets = {}
        for k in moments:
            iv = (
                family.boundary_bracket(hi, k)
                if boundary
                else family.tail_interval(y, hi, k)
            )
            width = None if iv is None else iv[1] - iv[0]
            if iv is None or not (width <= tols[k]) or not math.isfinite(iv[1]):
                brackets = None
                if (
                    width is not None
                    and hi >= 4096
                    and width > tols[k] * (budget / hi) ** 3
                ):
                    raise BudgetError(
                        f"series tail width {width:.3e} at n={hi} cannot reach "
                        f"{tols[k]:.3e} within the {budget}-term budget (y={y}, moment {k})"
                    )
                break
            brackets[k] = iv
        if brackets is not None:
            out = []
            for k in moments:
                partial = math.fsum(sums[k])
                blo, bhi = brackets[k]
                out.append(SeriesEval(partial + 0.5 * (blo + bhi), hi, 0.5 * (bhi - blo)))
            return out
        if hi >= budget:
            raise BudgetError(
                f"series tails uncertified after {hi} terms at y={y} "
                f"(moments {moments}, tolerances {tols})"
            )
        lo, hi = hi + 1, min(2 * hi, budget)


def _require_alpha(family) -> float:
    try:
        return family.alpha
    except (NotImplementedError, UnsupportedFamilyError) as exc:
        raise UnsupportedFamilyError(
            "family has no dom-f endpoint; normalize it first"
        ) from exc


def _check_boundary_summable(family, moment) -> None:
    div = family.boundary_divergent(moment)
    if div is True:
        raise DivergenceError(
            f"boundary series (moment {moment}) certified divergent at y=-alpha"
        )
    if div is None and family.boundary_bracket(_START_BLOCK, moment) is None:
        raise UncertifiedError(
            "family certifies neither summability nor divergence at y=-alpha"
        )


def _eval_moments(family, y, tols, moments):
    """Route an evaluation point to the interior or boundary machinery,
    raising DivergenceError beyond the domain."""
    if family.dom_f_empty:
        raise DivergenceError("dom f is empty for this family")
    a = _require_alpha(family)
    if y > -a:
        raise DivergenceError(f"series diverges: y={y} exceeds -alpha={-a}")
    if y == -a:
        for k in moments:
            _check_boundary_summable(family, k)
        return _eval_many(family, y, tols, moments, boundary=True)
    return _eval_many(family, y, tols, moments)


def eval_f(family: SequenceFamily, y: float, tol: float = 1e-12) -> SeriesEval:
    """f(y) within tol, certified; boundary y = -alpha allowed when the
    family proves summability there."""
    return _eval_moments(family, y, {0: tol}, (0,))[0]


def _eval_f_relaxed(family, y, tol) -> SeriesEval:
    """f(y) at the tightest certifiable tolerance from tol upward (grades of
    ten, up to 10^4 looser); slowly spaced levels cannot always certify the
    nominal target within the term budget."""
    last = None
    for mult in (1.0, 10.0, 100.0, 1e3, 1e4):
        try:
            return _eval_moments(family, y, {0: tol * mult}, (0,))[0]
        except BudgetError as exc:
            last = exc
    raise last


def eval_f_derivatives(
    family: SequenceFamily, y: float, tol: float = 1e-12
) -> tuple[float, float, float]:
    """(f, f', f'') at y < -alpha, each within tol."""
    a = _require_alpha(family)
    if not y < -a:
        raise DomainError(f"derivatives need y < -alpha = {-a}, got {y}")
    r = _eval_moments(family, y, {0: tol, 1: tol, 2: tol}, (0, 1, 2))
    return r[0].value, r[1].value, r[2].value


# ---------------------------------------------------------------------------
# profile


def estimate_alpha(family: SequenceFamily, n_terms: int = 4096) -> float:
    """Advisory limsup estimate of ln(p_n)/sigma_n over the top half of a
    long prefix; cannot certify domain membership near the boundary."""
    best = -math.inf
    for n in range(max(2, n_terms // 2), n_terms + 1):
        s = family.sigma(n)
        if s > 0.0:
            best = max(best, family.log_p(n) / s)
    return max(best, 0.0)


@functools.lru_cache(maxsize=256)
def _profile_cached(family: SequenceFamily, tol: float) -> SeriesProfile:
    smin = sigma_min_set(family)
    if smin.theta1 <= 0.0:
        raise UnsupportedFamilyError(
            f"levels must be positive (min sigma = {smin.theta1}); shift first"
        )
    estimated = False
    try:
        alpha = family.alpha
    except NotImplementedError:
        alpha = estimate_alpha(family)
        estimated = True
    if math.isinf(alpha):
        raise UnsupportedFamilyError("dom f is empty; profile undefined")
    if alpha > 0.0 and not estimated:
        # declared alpha must not be contradicted by a certificate of
        # convergence strictly outside (-inf, -alpha]
        probe = family.tail_interval(-0.5 * alpha, _START_BLOCK, 0)
        if probe is not None and math.isfinite(probe[1]):
            raise ConfigurationError(
                f"declared alpha={alpha} contradicted by a convergent tail at y={-0.5 * alpha}"
            )
    # spot-check that f really is finite strictly inside the declared domain
    try:
        _eval_many(family, -alpha - 1.0, {0: 1e-6}, (0,))
    except (DivergenceError, BudgetError) as exc:
        raise ConfigurationError(
            f"f could not be certified finite at y={-alpha - 1.0}: {exc}"
        ) from exc

    div0 = family.boundary_divergent(0)
    if div0 is True:
        case = BoundaryCase.OPEN_A
        f_b, gamma, theta2 = None, None, math.inf
    else:
        _check_boundary_summable(family, 0)
        f_b = _eval_many(family, -alpha, {0: tol}, (0,), boundary=True)[0].value
        div1 = family.boundary_divergent(1)
        if div1 is True:
            case = BoundaryCase.CLOSED_GAMMA_INFINITE_B
            gamma, theta2 = None, math.inf
        else:
            _check_boundary_summable(family, 1)
            case = BoundaryCase.CLOSED_GAMMA_FINITE_C
            gamma = _eval_many(family, -alpha, {1: tol}, (1,), boundary=True)[0].value
            theta2 = gamma / f_b
    return SeriesProfile(alpha, case, f_b, gamma, smin.theta1, theta2, smin, estimated)


def profile(family: SequenceFamily, tol: float = 1e-10) -> SeriesProfile:
    """Analytic profile (alpha, boundary case, theta1, theta2, ...); cached
    per (family, tol) so concurrent requests share one computation."""
    if family.constant_sigma:
        raise UnsupportedFamilyError("constant levels: the problem is degenerate")
    if family.dom_f_empty:
        raise UnsupportedFamilyError("dom f empty: the problem is degenerate")
    if family.sigma_direction != +1:
        raise UnsupportedFamilyError("levels must increase to +inf; normalize first")
    return _profile_cached(family, tol)


# ---------------------------------------------------------------------------
# phi and the conjugate of ln f


def phi(family: SequenceFamily, y: float, tol: float = 1e-10) -> float:
    """f'(y)/f(y) at y < -alpha, within tol; strictly increasing in y."""
    a = _require_alpha(family)
    if not y < -a:
        raise DomainError(f"phi needs y < -alpha = {-a}, got {y}")
    rough = _eval_moments(family, y, {0: 1e-4, 1: 1e-4}, (0, 1))
    f0 = max(rough[0].value, 1e-300)
    ratio = max(rough[1].value / f0, 1.0)
    t0 = 0.25 * tol * f0 / ratio
    t1 = 0.25 * tol * f0
    fine = _eval_moments(family, y, {0: t0, 1: t1}, (0, 1))
    return fine[1].value / fine[0].value


def phi_inverse(family: SequenceFamily, w: float, tol: float = 1e-10) -> float:
    """The unique y < -alpha with |phi(y) - w| <= tol, for theta1 < w < theta2.

    Brackets by geometric approach to the boundary on the right and doubling
    steps on the left, then runs the safeguarded scalar root finder.
    """
    prof = profile(family)
    if not math.isfinite(w) or w <= prof.theta1 or w >= prof.theta2:
        raise RangeError(
            f"w={w} outside the open range ({prof.theta1}, {prof.theta2})"
        )
    a = prof.alpha
    eval_tol = 0.25 * tol

    def g(y):
        return phi(family, y, eval_tol) - w

    # right end: approach -alpha geometrically until phi exceeds w
    hi = fhi = None
    step = 1.0
    for _ in range(80):
        y = -a - step
        val = g(y)
        if abs(val) <= 0.75 * tol:
            return y
        if val > 0.0:
            hi, fhi = y, val
            break
        step *= 0.5
    if hi is None:
        raise BudgetError(f"no right bracket for phi = {w} near y = {-a}")
    # left end: double away until phi drops below w
    lo = flo = None
    step = 1.0
    for _ in range(80):
        y = hi - step
        val = g(y)
        if abs(val) <= 0.75 * tol:
            return y
        if val < 0.0:
            lo, flo = y, val
            break
        step *= 2.0
    if lo is None:
        raise BudgetError(f"no left bracket for phi = {w}")
    res = solve_bracketed(
        g, lo, hi, flo, fhi, residual_tol=0.75 * tol, x_tol=1e-13, budget=200
    )
    return res.x


def lnf_conjugate(family: SequenceFamily, w: float, tol: float = 1e-10) -> float:
    """(ln f)*(w): +inf below theta1; -ln(sum of tied minimal weights) at
    theta1; w phi^{-1}(w) - ln f(phi^{-1}(w)) inside; -alpha w - ln f(-alpha)
    at and beyond theta2 (boundary case c only)."""
    prof = profile(family)
    t1_tol = 1e-12 * max(1.0, abs(prof.theta1))
    if not math.isfinite(w):
        raise RangeError(f"w must be finite, got {w}")
    if w < prof.theta1 - t1_tol:
        return math.inf
    if abs(w - prof.theta1) <= t1_tol:
        return -math.log(prof.sigma_min.p_sum)
    if w >= prof.theta2:
        return -prof.alpha * w - math.log(prof.f_at_boundary)
    # a residual delta in the root costs only O(delta^2) in the supremum
    # value, so fall back to a looser root when the tight one is not
    # certifiable within the term budget (slowly spaced level families)
    try:
        y = phi_inverse(family, w, min(tol, 1e-10))
    except BudgetError:
        y = phi_inverse(family, w, 1e-5)
    f_tol = max(0.25 * tol * max(1.0, _rough_f(family, y)), 5e-324)
    f_val = _eval_f_relaxed(family, y, f_tol)
    return w * y - math.log(f_val.value)


def _rough_f(family, y):
    try:
        return _eval_moments(family, y, {0: 1e-3}, (0,))[0].value
    except BudgetError:
        return 1.0


# ---------------------------------------------------------------------------
# the dual sums h_W


def _theta1(family) -> float:
    t = family.analytic_theta1
    return t if t is not None else sigma_min_set(family).theta1


def _mult_arrays(kind: Entropy, what: str, t: np.ndarray) -> np.ndarray:
    """Per-term multiplier m(t) with W*(t) = e^t m(t) ('conj'),
    (W*)'(t) = e^t m(t) ('grad'), (W*)''(t) = e^t m(t) ('hess')."""
    if kind is Entropy.MAXWELL_BOLTZMANN:
        return np.ones_like(t)
    z = np.exp(np.minimum(t, 0.0))  # t <= 0 guaranteed on BE paths
    if kind is Entropy.FERMI_DIRAC:
        z = np.exp(np.minimum(t, 700.0))
        if what == "conj":
            small = z < 1e-8
            return np.where(small, 1.0 - 0.5 * z, np.log1p(z) / np.where(small, 1.0, z))
        d = 1.0 / (1.0 + z)
        return d if what == "grad" else d * d
    if what == "conj":
        small = z < 1e-8
        return np.where(small, 1.0 + 0.5 * z, -np.log1p(-z) / np.where(small, 1.0, z))
    d = 1.0 / (1.0 - z)
    return d if what == "grad" else d * d


def _mult_bounds(kind: Entropy, what: str, z_next: float) -> tuple[float, float]:
    """Bounds of the multiplier over the whole tail, where z <= z_next."""
    if kind is Entropy.MAXWELL_BOLTZMANN:
        return 1.0, 1.0
    if kind is Entropy.FERMI_DIRAC:
        if what == "conj":
            lo = math.log1p(z_next) / z_next if z_next > 1e-8 else 1.0 - 0.5 * z_next
            return lo, 1.0
        d = 1.0 / (1.0 + z_next)
        return (d, 1.0) if what == "grad" else (d * d, 1.0)
    # bose-einstein: z_next < 1 strictly
    if what == "conj":
        hi = -math.log1p(-z_next) / z_next if z_next > 1e-8 else 1.0 + 0.5 * z_next
        return 1.0, hi
    d = 1.0 / (1.0 - z_next)
    return (1.0, d) if what == "grad" else (1.0, d * d)


def _eval_h_moments(family, kind, what, x, y, tols, moments, budget=_TERM_BUDGET):
    """sum p_n sigma^k m(x + sigma_n y) exp(x + sigma_n y) for k in moments,
    with tails deduced from the f-tails times the multiplier envelope."""
    a = _require_alpha(family)
    boundary = y == -a
    if boundary:
        for k in moments:
            _check_boundary_summable(family, k)
    sums = {k: [] for k in moments}
    lo, hi = 1, _START_BLOCK
    while True:
        logt = family.log_terms(y, lo, hi) + x
        sig = family.sigma_array(lo, hi)
        t = x + sig * y
        base = np.exp(logt) * _mult_arrays(kind, what, t)
        for k in moments:
            block = base if k == 0 else base * sig**k
            sums[k].append(float(block.sum()))
        t_next = x + family.sigma(hi + 1) * y
        if kind is Entropy.BOSE_EINSTEIN and t_next >= 0.0:
            raise DomainError("bose-einstein dual needs x + sigma_n y < 0 on the tail")
        z_next = math.exp(min(t_next, 700.0))
        mlo, mhi = _mult_bounds(kind, what, z_next)
        ex = math.exp(x)
        brackets = {}
        for k in moments:
            iv = (
                family.boundary_bracket(hi, k)
                if boundary
                else family.tail_interval(y, hi, k)
            )
            if iv is None:
                brackets = None
                break
            blo, bhi = ex * iv[0] * mlo, ex * iv[1] * mhi
            width = bhi - blo
            if not (width <= tols[k]) or not math.isfinite(bhi):
                brackets = None
                if hi >= 4096 and width > tols[k] * (budget / hi) ** 3:
                    raise BudgetError(
                        f"dual series tail width {width:.3e} at n={hi} cannot "
                        f"reach {tols[k]:.3e} within the budget at ({x}, {y})"
                    )
                break
            brackets[k] = (blo, bhi)
        if brackets is not None:
            out = []
            for k in moments:
                partial = math.fsum(sums[k])
                blo, bhi = brackets[k]
                out.append(SeriesEval(partial + 0.5 * (blo + bhi), hi, 0.5 * (bhi - blo)))
            return out
        if hi >= budget:
            raise BudgetError(f"dual series uncertified after {hi} terms at ({x}, {y})")
        lo, hi = hi + 1, min(2 * hi, budget)


def eval_h(
    family: SequenceFamily, kind: Entropy, x: float, y: float, tol: float = 1e-10
) -> float:
    """h_W(x, y) within tol; +inf signals a certified divergence (the point
    lies outside dom h_W)."""
    if family.dom_f_empty:
        return math.inf
    a = _require_alpha(family)
    if y > -a:
        return math.inf
    if kind is Entropy.BOSE_EINSTEIN and x + _theta1(family) * y >= 0.0:
        return math.inf
    if kind is Entropy.MAXWELL_BOLTZMANN:
        tol_f = max(tol * math.exp(-min(x, 700.0)), 5e-324)
        try:
            f_val = _eval_moments(family, y, {0: tol_f}, (0,))[0].value
        except DivergenceError:
            return math.inf
        return math.exp(x) * f_val
    try:
        return _eval_h_moments(family, kind, "conj", x, y, {0: tol}, (0,))[0].value
    except DivergenceError:
        return math.inf


def grad_h(
    family: SequenceFamily, kind: Entropy, x: float, y: float, tol: float = 1e-10
) -> tuple[float, float]:
    """The gradient series sum p_n (W*)'(x+sigma_n y) (1, sigma_n), valid on
    the interior and, in boundary case (c), at y = -alpha."""
    if family.dom_f_empty or family.constant_sigma:
        raise DomainError("gradient undefined: degenerate family")
    a = _require_alpha(family)
    if y > -a:
        raise DomainError(f"({x}, {y}) outside dom h: y > -alpha = {-a}")
    if kind is Entropy.BOSE_EINSTEIN and x + _theta1(family) * y >= 0.0:
        raise DomainError("outside dom h_BE: x + theta1 y >= 0")
    try:
        r = _eval_h_moments(family, kind, "grad", x, y, {0: tol, 1: tol}, (0, 1))
    except DivergenceError as exc:
        raise DomainError(f"gradient series diverges at ({x}, {y}): {exc}") from exc
    return r[0].value, r[1].value


def hessian_h(
    family: SequenceFamily, kind: Entropy, x: float, y: float, tol: float = 1e-10
) -> tuple[float, float, float]:
    """(h_xx, h_xy, h_yy) of h_W at an interior point."""
    a = _require_alpha(family)
    if not y < -a:
        raise DomainError(f"hessian needs y < -alpha = {-a}")
    r = _eval_h_moments(
        family, kind, "hess", x, y, {0: tol, 1: tol, 2: tol}, (0, 1, 2)
    )
    return r[0].value, r[1].value, r[2].value


def boundary_subdifferential(
    family: SequenceFamily, kind: Entropy, x: float, tol: float = 1e-10
) -> Optional[HalfLine]:
    """The subdifferential of h_W at (x, -alpha): a vertical half-line when
    the gradient series converges there (case c), the empty set (None) when
    it diverges (case b); precondition error when -alpha is outside dom f."""
    prof = profile(family)
    if prof.alpha <= 0.0:
        raise DomainError("boundary subdifferential needs alpha > 0")
    if prof.boundary_case is BoundaryCase.OPEN_A:
        raise DomainError("(x, -alpha) is outside dom h in boundary case (a)")
    if kind is Entropy.BOSE_EINSTEIN and x - prof.theta1 * prof.alpha >= 0.0:
        raise DomainError("(x, -alpha) outside dom h_BE")
    if prof.boundary_case is BoundaryCase.CLOSED_GAMMA_INFINITE_B:
        return None
    u, v = grad_h(family, kind, x, -prof.alpha, tol)
    return HalfLine(u, v)
