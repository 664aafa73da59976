"""The entropy minimization solver over countable index sets.

For the maxwell-boltzmann entropy the solve is complete: every target pair
(u, v) is classified against the attainment cone theta1 u <= v <= theta2 u,
the value H(u, v) = h*(u, v) is computed from the closed conjugate formula,
optimal occupation sequences are returned where the infimum is attained,
and where it is not (v > theta2 u, finite value) an explicit family of
feasible sequences with objectives converging to the value is constructed.

Forward solves (from dual multipliers (x, y) to the unique optimizer) work
for all three entropies.  Inverse bose-einstein/fermi-dirac solves are
best-effort Newton iterations that either succeed and verify, or return an
explicit failure report; no complete inverse theory exists for them.

Families whose levels decrease to -inf or dip below zero are normalized
internally (sign flip, then a constant shift), and every reported value,
multiplier and sequence is translated back to the original coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from .entropies import Entropy, entropy_value
from .errors import (
    BudgetError,
    DomainError,
    RangeError,
    UnsupportedFamilyError,
)
from .rootfind import solve_bracketed
from .sequences import (
    SequenceFamily,
    ShiftedSigma,
    flipped,
    sigma_min_set,
)
from . import series
from .series import BoundaryCase, SeriesProfile

__all__ = [
    "Region",
    "SequenceRule",
    "EpsilonFamily",
    "EpsilonMember",
    "EmpSolution",
    "InverseFailure",
    "EmpSolver",
]

# Relative tolerance for cone-boundary classification.  Points snapped to a
# boundary take its closed-form value; the snap error is O(rtol ln(1/rtol)),
# which must stay below the 1e-8 weak-duality slack.
_REGION_RTOL = 1e-12


class Region(Enum):
    INFEASIBLE_NEGATIVE = "infeasible-negative"
    ORIGIN = "origin"
    ZERO_WITH_POSITIVE_V = "zero-with-positive-v"
    LOWER_BOUNDARY = "lower-boundary"
    INTERIOR = "interior"
    UPPER_BOUNDARY_THETA2 = "upper-boundary-theta2"
    BEYOND_THETA2 = "beyond-theta2"
    BELOW_CONE = "below-cone"
    DEGENERATE_CONSTANT_SIGMA = "degenerate-constant-sigma"
    DEGENERATE_ALL_DIVERGENT = "degenerate-all-divergent"


_ATTAINED = {
    Region.ORIGIN,
    Region.LOWER_BOUNDARY,
    Region.INTERIOR,
    Region.UPPER_BOUNDARY_THETA2,
}


@dataclass(frozen=True)
class SequenceRule:
    """Closed-form description of an occupation sequence.

    form "zero": all terms vanish; "restricted": finitely many explicit
    terms; "exponential": u_n = p_n e^{x + sigma_n y} / (1 + a e^{x + sigma_n y})
    with the original-coordinate multipliers (x, y).
    """

    kind: Entropy
    form: str
    family: SequenceFamily
    x: Optional[float] = None
    y: Optional[float] = None
    support: Optional[tuple[tuple[int, float], ...]] = None
    _eval_family: Optional[SequenceFamily] = None
    _eval_x: Optional[float] = None
    _eval_y: Optional[float] = None

    def term(self, n: int) -> float:
        if n < 1:
            raise DomainError("term index must be >= 1")
        if self.form == "zero":
            return 0.0
        if self.form == "restricted":
            for k, val in self.support:
                if k == n:
                    return val
            return 0.0
        fam = self._eval_family or self.family
        x = self._eval_x if self._eval_x is not None else self.x
        y = self._eval_y if self._eval_y is not None else self.y
        lt = float(fam.log_terms(y, n, n)[0]) + x
        t = x + fam.sigma(n) * y
        a = self.kind.a
        if a == 0:
            return math.exp(lt)
        denom = 1.0 + a * math.exp(min(t, 700.0))
        return math.exp(lt) / denom

    def prefix(self, count: int) -> list[float]:
        return [self.term(n) for n in range(1, count + 1)]


@dataclass(frozen=True)
class EpsilonMember:
    """One feasible truncation: terms u_k = p_k e^{ups - sigma_k lam} up to n."""

    n: int
    lam: float
    ups: float
    objective: float
    terms: tuple[float, ...]


class EpsilonFamily:
    """Feasible truncated sequences for a target beyond theta2: the n-th
    member matches both constraints exactly and its objective
    (ups_n - 1) u - lam_n v decreases to the unattained value H(u, v)."""

    def __init__(self, family, prof, u, v, value):
        self._family = family  # normalized
        self._prof = prof
        self.u = u
        self.v = v
        self.value = value

    def _phi_prefix(self, t: float, n: int) -> float:
        lw = self._family.log_terms(0.0, 1, n) + self._family.sigma_array(1, n) * t
        s = self._family.sigma_array(1, n)
        m = lw.max()
        w = np.exp(lw - m)
        return float((s * w).sum() / w.sum())

    def member(self, n: int) -> EpsilonMember:
        """The n-term member; RangeError when n is too small to reach v/u."""
        w = self.v / self.u
        a = self._prof.alpha
        if not self._phi_prefix(-a, n) < w < self._phi_prefix(0.0, n):
            raise RangeError(f"truncation n={n} cannot reach slope {w}")

        def g(lam):
            return self._phi_prefix(-lam, n) - w

        res = solve_bracketed(
            g, 0.0, a, g(0.0), g(a), residual_tol=1e-12 * max(1.0, w), x_tol=1e-14
        )
        lam = res.x
        lw = self._family.log_terms(0.0, 1, n) - self._family.sigma_array(1, n) * lam
        m = float(lw.max())
        z = m + math.log(float(np.exp(lw - m).sum()))
        ups = math.log(self.u) - z
        terms = tuple(float(t) for t in np.exp(ups + lw))
        objective = (ups - 1.0) * self.u - lam * self.v
        return EpsilonMember(n, lam, ups, objective, terms)

    def converge(self, epsilon: float, n_max: int = 2**20, start: int = 8) -> EpsilonMember:
        """Double the truncation from `start` until the member objective is
        within epsilon of the value."""
        n = start
        last = None
        while n <= n_max:
            try:
                last = self.member(n)
                if abs(last.objective - self.value) <= epsilon:
                    return last
            except RangeError:
                pass
            n *= 2
        raise BudgetError(
            f"epsilon family did not reach {epsilon} by n={n_max}"
            + (f"; best gap {abs(last.objective - self.value):.3e}" if last else "")
        )


@dataclass(frozen=True)
class EmpSolution:
    region: Region
    value: float  # H(u, v)
    h_star: float  # h*(u, v); differs from H only where attainment fails badly
    attained: bool
    u: float
    v: float
    kind: Entropy
    solution: Optional[SequenceRule] = None
    epsilon_family: Optional[EpsilonFamily] = None
    multipliers: Optional[tuple[float, float]] = None


@dataclass(frozen=True)
class InverseFailure:
    """Honest non-result of a best-effort inverse solve."""

    kind: Entropy
    last_iterate: tuple[float, float]
    residual: tuple[float, float]
    message: str


ExplicitSequence = Sequence[float]


class EmpSolver:
    """Immutable per-family front end; all methods are safe to call
    concurrently once construction (normalization + profiling) finishes."""

    def __init__(self, family: SequenceFamily, tol: float = 1e-10):
        self.family = family
        self.tol = tol
        self._flip = 1
        self._shift = 0.0
        fam = family
        if fam.constant_sigma:
            self._fam = fam
            self._degenerate = "constant"
            self._profile = None
            self._sigma1 = fam.sigma(1)
            return
        if fam.sigma_direction == -1:
            fam = flipped(fam)
            self._flip = -1
        if fam.sigma_direction != +1:
            raise UnsupportedFamilyError("levels neither constant nor tending to +/-inf")
        smin = sigma_min_set(fam)
        if smin.theta1 <= 0.0:
            self._shift = smin.theta1 - 1.0
            fam = ShiftedSigma(fam, self._shift)
        self._fam = fam
        if fam.dom_f_empty:
            self._degenerate = "divergent"
            self._profile = None
            self._theta1_div = sigma_min_set(fam).theta1
            self._smin_div = sigma_min_set(fam)
            return
        self._degenerate = None
        self._profile = series.profile(fam, tol)

    # -- coordinate maps ----------------------------------------------------

    def _to_norm(self, u, v):
        return u, self._flip * v - self._shift * u

    def _from_norm_v(self, u, v_norm):
        return self._flip * (v_norm + self._shift * u)

    def _xy_to_norm(self, x, y):
        y_n = self._flip * y
        return x + self._shift * y_n, y_n

    def _xy_from_norm(self, x_n, y_n):
        return x_n - self._shift * y_n, self._flip * y_n

    @property
    def profile(self) -> Optional[SeriesProfile]:
        return self._profile

    # -- classification -----------------------------------------------------

    def classify(self, u: float, v: float) -> Region:
        """Region of (u, v) with respect to dom S, the attainment cone and
        the degenerate -inf cases (evaluated in normalized coordinates)."""
        if self._degenerate == "constant":
            if u == 0.0 and v == 0.0:
                return Region.ORIGIN
            if u < 0.0 or u == 0.0:
                return Region.INFEASIBLE_NEGATIVE
            ray = self._sigma1 * u
            scale = max(1.0, abs(v), abs(ray))
            if abs(v - ray) <= _REGION_RTOL * scale:
                return Region.DEGENERATE_CONSTANT_SIGMA
            # off the ray there is no feasible sequence at all
            return Region.BELOW_CONE if v < ray else Region.INFEASIBLE_NEGATIVE
        u_n, v_n = self._to_norm(u, v)
        if u_n < 0.0 or (u_n == 0.0 and v_n < 0.0):
            return Region.INFEASIBLE_NEGATIVE
        if u_n == 0.0 and v_n == 0.0:
            return Region.ORIGIN
        if u_n == 0.0:
            return Region.ZERO_WITH_POSITIVE_V
        if self._degenerate == "divergent":
            t1 = self._theta1_div
            scale = max(1.0, abs(v_n), t1 * u_n)
            if abs(v_n - t1 * u_n) <= _REGION_RTOL * scale:
                return Region.LOWER_BOUNDARY
            if v_n < t1 * u_n:
                return Region.BELOW_CONE
            return Region.DEGENERATE_ALL_DIVERGENT
        prof = self._profile
        scale1 = max(1.0, abs(v_n), abs(prof.theta1) * u_n)
        if abs(v_n - prof.theta1 * u_n) <= _REGION_RTOL * scale1:
            return Region.LOWER_BOUNDARY
        if v_n < prof.theta1 * u_n:
            return Region.BELOW_CONE
        if math.isfinite(prof.theta2):
            scale2 = max(1.0, abs(v_n), prof.theta2 * u_n)
            if abs(v_n - prof.theta2 * u_n) <= _REGION_RTOL * scale2:
                return Region.UPPER_BOUNDARY_THETA2
            if v_n > prof.theta2 * u_n:
                return Region.BEYOND_THETA2
        return Region.INTERIOR

    # -- maxwell-boltzmann values -------------------------------------------

    def _phi_root(self, w: float) -> float:
        """Invert the slope bijection at w, relaxing the residual target when
        the tight one exceeds what the family's tails can certify."""
        for root_tol in (min(self.tol, 1e-12) * 0.25, max(self.tol, 1e-10) * 0.25, 1e-5):
            try:
                return series.phi_inverse(self._fam, w, root_tol)
            except BudgetError:
                continue
        raise BudgetError(f"slope inversion at w={w} exceeded every tolerance tier")

    def _smin(self):
        if self._degenerate == "divergent":
            return self._smin_div
        return self._profile.sigma_min

    def _value_h_star(self, region: Region, u: float, v_n: float):
        """(H, h*) in normalized coordinates for the maxwell-boltzmann case."""
        inf = math.inf
        if self._degenerate == "constant":
            if region is Region.ORIGIN:
                return 0.0, -inf
            if region is Region.DEGENERATE_CONSTANT_SIGMA:
                return -inf, -inf
            return inf, -inf  # off the feasible ray; h = +inf identically
        if self._degenerate == "divergent":
            if region is Region.ORIGIN:
                return 0.0, -inf
            if region is Region.LOWER_BOUNDARY:
                smin = self._smin()
                h = u * (math.log(u) - 1.0 - math.log(smin.p_sum))
                return h, -inf
            if region is Region.DEGENERATE_ALL_DIVERGENT:
                return -inf, -inf
            return inf, -inf
        prof = self._profile
        if region is Region.ORIGIN:
            return 0.0, 0.0
        if region is Region.INFEASIBLE_NEGATIVE:
            return inf, inf
        if region is Region.ZERO_WITH_POSITIVE_V:
            return inf, -prof.alpha * v_n
        if region is Region.BELOW_CONE:
            return inf, inf
        if region is Region.LOWER_BOUNDARY:
            val = u * (math.log(u) - 1.0 - math.log(prof.sigma_min.p_sum))
            return val, val
        if region in (Region.UPPER_BOUNDARY_THETA2, Region.BEYOND_THETA2):
            x = math.log(u / prof.f_at_boundary)
            val = (x - 1.0) * u - prof.alpha * v_n
            return val, val
        w = v_n / u
        val = u * (math.log(u) - 1.0) + u * series.lnf_conjugate(
            self._fam, w, self.tol / max(1.0, u)
        )
        return val, val

    def value_mb(self, u: float, v: float) -> float:
        """H(u, v) for the maxwell-boltzmann entropy: 0 at the origin, -inf
        on the degenerate regions, +inf where no feasible sequence exists,
        and the closed conjugate formula on the cone."""
        region = self.classify(u, v)
        _, v_n = self._to_norm(u, v)
        return self._value_h_star(region, u, v_n)[0]

    def h_star_mb(self, u: float, v: float) -> float:
        """h*(u, v); differs from H(u, v) at (0, v > 0), where the dual value
        -alpha v is finite but the primal problem is infeasible."""
        region = self.classify(u, v)
        _, v_n = self._to_norm(u, v)
        return self._value_h_star(region, u, v_n)[1]

    def solve_mb(self, u: float, v: float) -> EmpSolution:
        """Full maxwell-boltzmann solve: value, attainment, optimal sequence
        or epsilon-optimal family, and dual multipliers where they exist."""
        region = self.classify(u, v)
        _, v_n = self._to_norm(u, v)
        value, h_star = self._value_h_star(region, u, v_n)
        kind = Entropy.MAXWELL_BOLTZMANN
        attained = region in _ATTAINED
        rule = None
        eps_fam = None
        mult = None
        if region is Region.ORIGIN:
            rule = SequenceRule(kind, "zero", self.family)
        elif region is Region.LOWER_BOUNDARY:
            smin = self._smin()
            support = tuple(
                (n, u * self.family.p(n) / smin.p_sum) for n in smin.indices
            )
            rule = SequenceRule(kind, "restricted", self.family, support=support)
        elif region is Region.INTERIOR:
            prof = self._profile
            w = v_n / u
            y_n = self._phi_root(w)
            f_rough = series.eval_f(self._fam, y_n, tol=1e-3).value
            f_tol = max(min(self.tol, 1e-12) * max(1.0, f_rough), 5e-324)
            f_val = series._eval_f_relaxed(self._fam, y_n, f_tol).value
            x_n = math.log(u) - math.log(f_val)
            x, y = self._xy_from_norm(x_n, y_n)
            mult = (x, y)
            rule = SequenceRule(
                kind, "exponential", self.family, x=x, y=y,
                _eval_family=self._fam, _eval_x=x_n, _eval_y=y_n,
            )
        elif region is Region.UPPER_BOUNDARY_THETA2:
            prof = self._profile
            x_n = math.log(u / prof.f_at_boundary)
            y_n = -prof.alpha
            x, y = self._xy_from_norm(x_n, y_n)
            mult = (x, y)
            rule = SequenceRule(
                kind, "exponential", self.family, x=x, y=y,
                _eval_family=self._fam, _eval_x=x_n, _eval_y=y_n,
            )
        elif region is Region.BEYOND_THETA2:
            eps_fam = EpsilonFamily(self._fam, self._profile, u, v_n, value)
        return EmpSolution(
            region, value, h_star, attained, u, v, kind, rule, eps_fam, mult
        )

    # -- forward and inverse solves ------------------------------------------

    def forward_solve(self, kind: Entropy, x: float, y: float) -> EmpSolution:
        """From dual multipliers to the unique optimal occupation sequence:
        (u, v) is the gradient of h_W at (x, y) and the value follows from
        Fenchel equality x u + y v - h_W(x, y)."""
        if self._degenerate is not None:
            raise DomainError("forward solve undefined for degenerate families")
        x_n, y_n = self._xy_to_norm(x, y)
        prof = self._profile
        if y_n > -prof.alpha or (
            y_n == -prof.alpha and prof.boundary_case is not BoundaryCase.CLOSED_GAMMA_FINITE_C
        ):
            raise DomainError(
                f"gradient series does not converge at y={y} (dom f endpoint)"
            )
        # slowly spaced level families may not certify the tight tolerance;
        # relax once before giving up
        last = None
        for tol in (self.tol, 1e3 * self.tol):
            try:
                u, v_n = series.grad_h(self._fam, kind, x_n, y_n, tol)
                h = series.eval_h(self._fam, kind, x_n, y_n, tol)
                break
            except BudgetError as exc:
                last = exc
        else:
            raise last
        value = x_n * u + y_n * v_n - h
        v = self._from_norm_v(u, v_n)
        region = self.classify(u, v)
        rule = SequenceRule(
            kind, "exponential", self.family, x=x, y=y,
            _eval_family=self._fam, _eval_x=x_n, _eval_y=y_n,
        )
        return EmpSolution(region, value, value, True, u, v, kind, rule, None, (x, y))

    def inverse_solve_bf(
        self, kind: Entropy, u: float, v: float, tol: float = 1e-10
    ) -> Union[EmpSolution, InverseFailure]:
        """Best-effort inverse solve for bose-einstein / fermi-dirac targets
        strictly inside the cone: damped Newton on the dual potential
        h_W(x, y) - x u - y v, initialized at the maxwell-boltzmann
        multipliers.  Returns an InverseFailure report when it cannot verify
        a solution; never a guessed value."""
        if kind is Entropy.MAXWELL_BOLTZMANN:
            raise DomainError("use solve_mb for maxwell-boltzmann targets")
        region = self.classify(u, v)
        if region is not Region.INTERIOR:
            raise RangeError(
                f"inverse solve requires a strict-cone interior target, got {region}"
            )
        _, v_n = self._to_norm(u, v)
        prof = self._profile
        w = v_n / u
        scale = max(1.0, u, abs(v_n))

        def accept(xy):
            x, y = self._xy_from_norm(*xy)
            return self.forward_solve(kind, x, y)

        try:
            y_c = series.phi_inverse(self._fam, w, 1e-10)
        except BudgetError:
            try:
                y_c = series.phi_inverse(self._fam, w, 1e-5)
            except BudgetError as exc:
                return InverseFailure(
                    kind, (math.nan, math.nan), (math.inf, math.inf),
                    f"newton aborted: {exc}",
                )
        f_c = series.eval_f(self._fam, y_c, tol=1e-8 * max(1.0, u)).value
        x_c = math.log(u / f_c)
        if kind is Entropy.BOSE_EINSTEIN and x_c + prof.theta1 * y_c >= 0.0:
            x_c = -prof.theta1 * y_c - 1.0

        failure = None
        # slowly spaced level families cannot certify the tight gradient
        # series near the domain endpoint; retry once at a looser target
        for relax in (1.0, 1e3):
            res_tol = max(tol, 1e-11) * scale * relax
            try:
                got = self._inverse_newton(
                    kind, u, v_n, prof, (x_c, y_c), res_tol, scale
                )
            except (DomainError, BudgetError) as exc:
                failure = InverseFailure(
                    kind, self._xy_from_norm(x_c, y_c), (math.inf, math.inf),
                    f"newton aborted: {exc}",
                )
                continue
            if isinstance(got, tuple):
                return accept(got)
            failure = got
        return failure

    def _inverse_newton(self, kind, u, v_n, prof, start, res_tol, scale):
        """One damped-Newton attempt; returns the root (x, y) in normalized
        coordinates or an InverseFailure capturing the last iterate."""
        floor_tol = max(res_tol, 1e-9 * scale)
        s_tol = res_tol / 10.0
        x_n, y_n = start
        r0 = r1 = math.inf
        best = None
        best_norm = math.inf
        best_it = 0

        def potential(xx, yy):
            return series.eval_h(self._fam, kind, xx, yy, s_tol) - xx * u - yy * v_n

        d_cur = potential(x_n, y_n)
        for it in range(60):
            gu, gv = series.grad_h(self._fam, kind, x_n, y_n, s_tol)
            r0, r1 = gu - u, gv - v_n
            norm = max(abs(r0), abs(r1))
            if norm < best_norm:
                best, best_norm, best_it = (x_n, y_n), norm, it
            if norm <= res_tol:
                return x_n, y_n
            if it - best_it >= 4:  # progress stopped: noise floor
                if best_norm <= floor_tol:
                    return best
                break
            h00, h01, h11 = series.hessian_h(self._fam, kind, x_n, y_n, s_tol)
            det = h00 * h11 - h01 * h01
            if det <= 0.0 or not math.isfinite(det):
                break
            dx = -(h11 * r0 - h01 * r1) / det
            dy = -(-h01 * r0 + h00 * r1) / det
            slope = r0 * dx + r1 * dy
            in_basin = norm <= 1e-6 * scale
            step = 1.0
            ok = False
            for _ in range(50):
                xx, yy = x_n + step * dx, y_n + step * dy
                in_dom = yy < -prof.alpha and (
                    kind is not Entropy.BOSE_EINSTEIN
                    or xx + prof.theta1 * yy < 0.0
                )
                if in_dom:
                    d_new = potential(xx, yy)
                    if in_basin or d_new <= d_cur + 1e-4 * step * slope:
                        ok = True
                        break
                step *= 0.5
            if not ok:
                if best_norm <= floor_tol:
                    return best
                break
            x_n, y_n, d_cur = xx, yy, d_new
        return InverseFailure(
            kind,
            self._xy_from_norm(x_n, y_n),
            (r0, r1),
            f"newton residual ({r0:.3e}, {r1:.3e}) above tolerance {res_tol:.3e}",
        )

    # -- objective evaluation --------------------------------------------------

    def objective_value(
        self,
        kind: Entropy,
        seq: Union[SequenceRule, ExplicitSequence],
        tol: float = 1e-10,
    ) -> float:
        """sum p_n W(u_n / p_n) under the everywhere-defined summation
        convention (partial-sum limit; +inf when it does not exist, which
        cannot happen for the nonnegative-deficit sequences accepted here)."""
        if isinstance(seq, SequenceRule):
            if seq.form == "zero":
                return 0.0
            if seq.form == "restricted":
                return math.fsum(
                    self.family.p(n) * entropy_value(kind, val / self.family.p(n))
                    for n, val in seq.support
                )
            return self._objective_exponential(kind, seq, tol)
        terms = [float(t) for t in seq]
        if any(t < 0.0 for t in terms):
            raise DomainError("occupation terms must be nonnegative")
        return math.fsum(
            self.family.p(n + 1) * entropy_value(kind, t / self.family.p(n + 1))
            for n, t in enumerate(terms)
        )

    def _objective_exponential(self, kind, rule, tol):
        fam = rule._eval_family or self._fam
        x = rule._eval_x if rule._eval_x is not None else rule.x
        y = rule._eval_y if rule._eval_y is not None else rule.y
        a = kind.a
        lo, hi = 1, 64
        blocks = []
        while True:
            lt = fam.log_terms(y, lo, hi) + x
            t = x + fam.sigma_array(lo, hi) * y
            q = np.exp(np.minimum(t, 0.0))
            if a == 0:
                ratio = t - 1.0
            elif a == 1:
                small = q < 1e-8
                l1p = np.where(small, 1.0 - 0.5 * q, np.log1p(q) / np.where(small, 1.0, q))
                ratio = (t - np.log1p(q)) / (1.0 + q) - l1p / (1.0 + q)
            else:
                small = q < 1e-8
                m1p = np.where(
                    small, -1.0 - 0.5 * q, np.log1p(-q) / np.where(small, 1.0, q)
                )
                ratio = (t - np.log1p(-q)) / (1.0 - q) + m1p / (1.0 - q)
            blocks.append(float((np.exp(lt) * ratio).sum()))
            # past t <= -ln 3: W(g(t)) = e^t [(t - 1) + d(t)] with
            # |d(t)| <= 5 e^t (|t| + 2), so the remaining objective mass is
            # (x-1) T0 + y T1 up to an exponentially small correction
            t_next = x + fam.sigma(hi + 1) * y
            if t_next <= -math.log(3.0):
                t0 = fam.tail_interval(y, hi, 0)
                t1 = fam.tail_interval(y, hi, 1)
                if t0 is not None and t1 is not None:
                    ex = math.exp(x)
                    q_next = math.exp(t_next)
                    halfw = 0.5 * ex * (
                        abs(x - 1.0) * (t0[1] - t0[0]) + abs(y) * (t1[1] - t1[0])
                    )
                    corr = 5.0 * q_next * ex * ((abs(x) + 2.0) * t0[1] + abs(y) * t1[1])
                    if halfw + corr <= 0.5 * tol:
                        tail_mid = ex * (
                            (x - 1.0) * 0.5 * (t0[0] + t0[1])
                            + y * 0.5 * (t1[0] + t1[1])
                        )
                        return math.fsum(blocks) + tail_mid
            if hi >= 2**21:
                raise BudgetError("objective series did not certify its tail")
            lo, hi = hi + 1, 2 * hi

    # -- biconjugate ---------------------------------------------------------

    def biconjugate_check(
        self, x: float, y: float, sample_budget: int = 10_000
    ) -> tuple[float, float]:
        """Numerical check of H* = h: rhs = h(x, y) summed directly, lhs =
        sup over sampled dom-H points of x u + y v - H(u, v).  Always
        lhs <= rhs up to sampling gap."""
        x_n, y_n = self._xy_to_norm(x, y)
        rhs = series.eval_h(self._fam, Entropy.MAXWELL_BOLTZMANN, x_n, y_n, self.tol) \
            if self._degenerate is None else math.inf
        if self._degenerate is not None:
            # H takes -inf on its ray/cone: the sup is +inf immediately
            return math.inf, rhs
        prof = self._profile
        n_w = max(16, int(math.sqrt(sample_budget / 4.0)))
        n_u = max(16, sample_budget // n_w)
        u_grid = np.logspace(-3.0, 3.0, n_u)
        w_hi = prof.theta2 * 3.0 if math.isfinite(prof.theta2) else prof.theta1 + float(n_w)
        w_grid = np.linspace(prof.theta1, w_hi, n_w)
        best = 0.0  # the origin sample: x*0 + y*0 - H(0,0) = 0
        for w in w_grid:
            c = series.lnf_conjugate(self._fam, float(w), self.tol)
            if math.isinf(c):
                continue
            # H(u, wu) = u ln u - u + u c on the cone
            vals = x_n * u_grid + y_n * w * u_grid - (
                u_grid * np.log(u_grid) - u_grid + u_grid * c
            )
            best = max(best, float(vals.max()))
        return best, rhs
