"""Exact finite-n entropy minimization under one or two moment constraints.

Closed forms where they exist (proportional split under a single
constraint, explicit multipliers for the maxwell-boltzmann two-constraint
problem), damped Newton on the smooth strictly convex dual for the
bose-einstein and fermi-dirac cases, greedy zonotope envelopes for
fermi-dirac feasibility, and a grid-refinement oracle (n <= 4) kept fully
independent of the multiplier path so the two can cross-check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .entropies import Entropy, entropy_value
from .errors import (
    DomainError,
    InfeasibleError,
    NumericalFailureError,
    RangeError,
)
from .rootfind import solve_bracketed

__all__ = [
    "BoundaryFlag",
    "Feasibility",
    "FiniteProblem",
    "FiniteSolution",
    "solve_single",
    "phi_n",
    "phi_n_inverse",
    "solve_two_mb_be",
    "solve_two_fd",
    "fd_feasible",
    "brute_force_oracle",
    "kkt_residual",
]


class BoundaryFlag(Enum):
    INTERIOR_KKT = "interior-kkt"
    LOWER_EDGE = "lower-edge"
    UPPER_EDGE = "upper-edge"
    SINGLE_CONSTRAINT = "single-constraint"
    ORIGIN = "origin"
    ORACLE_FALLBACK = "oracle-fallback"


class Feasibility(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class FiniteSolution:
    u_bar: tuple[float, ...]
    value: float
    multipliers: Optional[tuple[float, float]]
    boundary_flag: BoundaryFlag


@dataclass(frozen=True)
class FiniteProblem:
    """A finite instance; v = None selects the single-constraint problem."""

    kind: Entropy
    p: tuple[float, ...]
    sigma: tuple[float, ...]
    u: float
    v: Optional[float] = None

    def __post_init__(self):
        if len(self.p) != len(self.sigma) or not self.p:
            raise DomainError("p and sigma must be equal-length and nonempty")

    def solve(self, tol: float = 1e-10) -> FiniteSolution:
        if self.v is None:
            return solve_single(self.kind, self.p, self.u)
        if self.kind is Entropy.FERMI_DIRAC:
            return solve_two_fd(self.p, self.sigma, self.u, self.v, tol)
        return solve_two_mb_be(self.kind, self.p, self.sigma, self.u, self.v, tol)


def _w_sum(kind: Entropy, p, u_bar) -> float:
    return math.fsum(
        pk * entropy_value(kind, uk / pk) for pk, uk in zip(p, u_bar)
    )


def kkt_residual(kind: Entropy, p, sigma, u_bar, alpha: float, beta: float) -> float:
    """max_k |W'(u_k/p_k) - (alpha + beta sigma_k)| over interior coordinates."""
    from .entropies import entropy_derivative

    worst = 0.0
    for pk, sk, uk in zip(p, sigma, u_bar):
        worst = max(worst, abs(entropy_derivative(kind, uk / pk) - alpha - beta * sk))
    return worst


# ---------------------------------------------------------------------------
# single constraint


def solve_single(kind: Entropy, p, u: float) -> FiniteSolution:
    """Minimize sum p_k W(u_k/p_k) subject to sum u_k = u, u_k >= 0: the
    proportional split u_k = u p_k / rho is optimal."""
    p = [float(x) for x in p]
    if u < 0.0:
        raise InfeasibleError(f"u must be nonnegative, got {u}")
    n = len(p)
    if u == 0.0:
        return FiniteSolution((0.0,) * n, 0.0, None, BoundaryFlag.ORIGIN)
    rho = math.fsum(p)
    if kind is Entropy.FERMI_DIRAC and u > rho:
        raise InfeasibleError(f"fermi-dirac capacity is rho = {rho} < u = {u}")
    u_bar = tuple(u * pk / rho for pk in p)
    value = rho * entropy_value(kind, u / rho)
    return FiniteSolution(u_bar, value, None, BoundaryFlag.SINGLE_CONSTRAINT)


# ---------------------------------------------------------------------------
# the finite mean-level map phi_n


def phi_n(p, sigma, t: float) -> float:
    """Weighted mean of sigma under weights p_k exp(sigma_k t)."""
    p = np.asarray(p, dtype=float)
    s = np.asarray(sigma, dtype=float)
    e = s * t
    w = p * np.exp(e - e.max())
    return float((s * w).sum() / w.sum())


def phi_n_inverse(p, sigma, w: float, tol: float = 1e-12) -> float:
    """The unique t with phi_n(t) = w, for w strictly inside (min s, max s)."""
    s = np.asarray(sigma, dtype=float)
    eta1, eta2 = float(s.min()), float(s.max())
    if not eta1 < w < eta2:
        raise RangeError(f"w={w} outside the open range ({eta1}, {eta2})")

    def g(t):
        return phi_n(p, sigma, t) - w

    t_lo = t_hi = 0.0
    f0 = g(0.0)
    if abs(f0) <= tol:
        return 0.0
    step = 1.0
    if f0 < 0.0:
        f_lo = f0
        for _ in range(200):
            t_hi = t_lo + step
            f_hi = g(t_hi)
            if f_hi >= 0.0:
                break
            t_lo, f_lo = t_hi, f_hi
            step *= 2.0
        else:
            raise NumericalFailureError("phi_n bracket expansion failed")
    else:
        f_hi = f0
        for _ in range(200):
            t_lo = t_hi - step
            f_lo = g(t_lo)
            if f_lo <= 0.0:
                break
            t_hi, f_hi = t_lo, f_lo
            step *= 2.0
        else:
            raise NumericalFailureError("phi_n bracket expansion failed")
    res = solve_bracketed(g, t_lo, t_hi, f_lo, f_hi, residual_tol=tol, x_tol=1e-14)
    return res.x


# ---------------------------------------------------------------------------
# two constraints, maxwell-boltzmann / bose-einstein


def _edge_solution(kind, p, sigma, u, eta, flag) -> FiniteSolution:
    """v = eta * u forces all mass onto the levels tying eta, where the
    single-constraint proportional split is optimal."""
    scale = 1e-12 * max(1.0, abs(eta))
    idx = [k for k, s in enumerate(sigma) if abs(s - eta) <= scale]
    rho = math.fsum(p[k] for k in idx)
    if kind is Entropy.FERMI_DIRAC and u > rho:
        raise InfeasibleError("edge mass exceeds fermi-dirac capacity")
    u_bar = [0.0] * len(p)
    for k in idx:
        u_bar[k] = u * p[k] / rho
    value = rho * entropy_value(kind, u / rho)
    return FiniteSolution(tuple(u_bar), value, None, flag)


def _cone_position(sigma, u, v):
    eta1, eta2 = min(sigma), max(sigma)
    tol = 1e-12 * max(1.0, abs(v), abs(eta1) * u, abs(eta2) * u)
    if v < eta1 * u - tol or v > eta2 * u + tol:
        return "outside", eta1, eta2
    if abs(v - eta1 * u) <= tol:
        return "lower", eta1, eta2
    if abs(v - eta2 * u) <= tol:
        return "upper", eta1, eta2
    return "interior", eta1, eta2


def solve_two_mb_be(
    kind: Entropy, p, sigma, u: float, v: float, tol: float = 1e-10
) -> FiniteSolution:
    """Two-constraint exact solve for maxwell-boltzmann (closed-form
    multipliers) or bose-einstein (damped Newton on the dual)."""
    if kind not in (Entropy.MAXWELL_BOLTZMANN, Entropy.BOSE_EINSTEIN):
        raise DomainError("use solve_two_fd for the fermi-dirac entropy")
    p = [float(x) for x in p]
    sigma = [float(x) for x in sigma]
    if u < 0.0 or (u == 0.0 and v != 0.0):
        raise InfeasibleError(f"no feasible point for (u, v) = ({u}, {v})")
    n = len(p)
    if u == 0.0:
        return FiniteSolution((0.0,) * n, 0.0, None, BoundaryFlag.ORIGIN)
    where, eta1, eta2 = _cone_position(sigma, u, v)
    if eta1 == eta2:
        if where == "outside":
            raise InfeasibleError("degenerate cone: v must equal sigma_1 * u")
        sol = solve_single(kind, p, u)
        return FiniteSolution(sol.u_bar, sol.value, None, BoundaryFlag.SINGLE_CONSTRAINT)
    if where == "outside":
        raise InfeasibleError(
            f"(u, v) = ({u}, {v}) outside the cone [{eta1 * u}, {eta2 * u}]"
        )
    if where == "lower":
        return _edge_solution(kind, p, sigma, u, eta1, BoundaryFlag.LOWER_EDGE)
    if where == "upper":
        return _edge_solution(kind, p, sigma, u, eta2, BoundaryFlag.UPPER_EDGE)

    w = v / u
    root_tol = 1e-12 * max(1.0, abs(w))
    beta = phi_n_inverse(p, sigma, w, root_tol)
    lp = np.log(np.asarray(p))
    s = np.asarray(sigma)
    expo = lp + s * beta
    m = float(expo.max())
    z = float(np.exp(expo - m).sum())
    alpha = math.log(u) - (m + math.log(z))
    if kind is Entropy.MAXWELL_BOLTZMANN:
        u_bar = np.exp(alpha + expo)
        value = _w_sum(kind, p, u_bar)
        return FiniteSolution(
            tuple(u_bar), value, (alpha, beta), BoundaryFlag.INTERIOR_KKT
        )
    return _dual_newton_be(p, sigma, u, v, alpha, beta)


def _dual_newton_be(p, sigma, u, v, a0: float, b0: float) -> FiniteSolution:
    p = np.asarray(p, dtype=float)
    s = np.asarray(sigma, dtype=float)
    a, b = a0, b0
    t = a + b * s
    if t.max() >= 0.0:
        a -= t.max() + 1.0
        t = a + b * s

    def dual(a_, b_, t_):
        return float((-p * np.log1p(-np.exp(t_))).sum()) - a_ * u - b_ * v

    def finish(a_, b_, g_):
        u_bar = p * g_
        value = _w_sum(Entropy.BOSE_EINSTEIN, p, u_bar)
        return FiniteSolution(tuple(u_bar), value, (a_, b_), BoundaryFlag.INTERIOR_KKT)

    # residuals below ~1e-11 of the constraint scale sit in float noise, so
    # accept the best iterate once progress stops below a 1e-9 floor
    best = None
    best_norm = math.inf
    best_it = 0
    d_cur = dual(a, b, t)
    for it in range(100):
        g = 1.0 / np.expm1(-t)  # e^t/(1-e^t)
        r0 = float((p * g).sum()) - u
        r1 = float((p * s * g).sum()) - v
        norm = max(abs(r0) / max(1.0, u), abs(r1) / max(1.0, abs(v)))
        if norm < best_norm:
            best, best_norm, best_it = (a, b, g), norm, it
        if norm <= 1e-11:
            return finish(a, b, g)
        if it - best_it >= 4:  # no progress: float floor reached
            if best_norm <= 1e-9:
                return finish(*best)
            raise NumericalFailureError(
                f"bose-einstein Newton stalled at residual {best_norm:.3e}"
            )
        gp = g * (1.0 + g)
        h00 = float((p * gp).sum())
        h01 = float((p * s * gp).sum())
        h11 = float((p * s * s * gp).sum())
        det = h00 * h11 - h01 * h01
        if det <= 0.0 or not math.isfinite(det):
            raise NumericalFailureError("bose-einstein dual hessian degenerate")
        da = -(h11 * r0 - h01 * r1) / det
        db = -(-h01 * r0 + h00 * r1) / det
        slope = r0 * da + r1 * db  # directional derivative of the dual
        # inside the quadratic basin the Armijo decrease sinks below float
        # noise; take undamped steps there (domain backtracking only)
        in_basin = norm <= 1e-6
        step = 1.0
        stalled = True
        for _ in range(60):
            ta = a + step * da
            tb = b + step * db
            t_new = ta + tb * s
            if t_new.max() < 0.0:
                d_new = dual(ta, tb, t_new)
                if in_basin or d_new <= d_cur + 1e-4 * step * slope:
                    stalled = False
                    break
            step *= 0.5
        if stalled:
            if best_norm <= 1e-9:
                return finish(*best)
            raise NumericalFailureError("bose-einstein line search stalled")
        a, b, t, d_cur = ta, tb, t_new, d_new
    if best_norm <= 1e-9:
        return finish(*best)
    raise NumericalFailureError("bose-einstein Newton did not converge in 100 steps")


# ---------------------------------------------------------------------------
# fermi-dirac: zonotope feasibility and two-constraint solve


def _envelope_v(p, sigma, u: float, lower: bool) -> float:
    """Greedy extreme of sum sigma_k u_k at first coordinate u: fill smallest
    (largest) slopes first for the lower (upper) envelope."""
    order = np.argsort(sigma, kind="stable")
    if not lower:
        order = order[::-1]
    remaining = u
    total = 0.0
    for k in order:
        take = min(remaining, p[k])
        total += sigma[k] * take
        remaining -= take
        if remaining <= 0.0:
            break
    return total


def fd_feasible(p, sigma, u: float, v: float) -> Feasibility:
    """Membership of (u, v) in the zonotope sum_k [0, p_k] (1, sigma_k)."""
    p = np.asarray(p, dtype=float)
    s = np.asarray(sigma, dtype=float)
    rho = float(p.sum())
    scale = max(1.0, abs(u), abs(v), rho, float(np.abs(s).max()) * max(1.0, abs(u)))
    atol = 1e-12 * scale
    if u < -atol or u > rho + atol:
        return Feasibility.INFEASIBLE
    if u <= atol:
        return Feasibility.BOUNDARY if abs(v) <= atol else Feasibility.INFEASIBLE
    if u >= rho - atol:
        v_full = float((s * p).sum())
        return Feasibility.BOUNDARY if abs(v - v_full) <= atol else Feasibility.INFEASIBLE
    vmin = _envelope_v(p, s, u, lower=True)
    vmax = _envelope_v(p, s, u, lower=False)
    if v < vmin - atol or v > vmax + atol:
        return Feasibility.INFEASIBLE
    if v <= vmin + atol or v >= vmax - atol:
        return Feasibility.BOUNDARY
    return Feasibility.INTERIOR  # vmin < v < vmax strictly, kinks included


def _fd_face_solution(p, sigma, u: float, v: float) -> FiniteSolution:
    """Exact solution on the zonotope boundary: the greedy fill is forced up
    to the marginal slope group, which takes the proportional split."""
    n = len(p)
    vmin = _envelope_v(np.asarray(p), np.asarray(sigma), u, lower=True)
    lower = abs(v - vmin) <= 1e-9 * max(1.0, abs(v), abs(vmin))
    order = sorted(range(n), key=lambda k: (sigma[k], k))
    if not lower:
        order = order[::-1]
    u_bar = [0.0] * n
    remaining = u
    pos = 0
    while pos < len(order) and remaining > 0.0:
        k = order[pos]
        group = [k]
        while pos + len(group) < len(order) and sigma[order[pos + len(group)]] == sigma[k]:
            group.append(order[pos + len(group)])
        cap = math.fsum(p[g] for g in group)
        if remaining >= cap:
            for g in group:
                u_bar[g] = p[g]
            remaining -= cap
        else:
            for g in group:
                u_bar[g] = remaining * p[g] / cap
            remaining = 0.0
        pos += len(group)
    value = _w_sum(Entropy.FERMI_DIRAC, p, u_bar)
    flag = BoundaryFlag.LOWER_EDGE if lower else BoundaryFlag.UPPER_EDGE
    return FiniteSolution(tuple(u_bar), value, None, flag)


def solve_two_fd(p, sigma, u: float, v: float, tol: float = 1e-10) -> FiniteSolution:
    """Two-constraint fermi-dirac solve: Newton on the dual when (u, v) is
    interior to the zonotope, exact greedy-face solution on its boundary."""
    p = [float(x) for x in p]
    sigma = [float(x) for x in sigma]
    n = len(p)
    if u == 0.0 and v == 0.0:
        return FiniteSolution((0.0,) * n, 0.0, None, BoundaryFlag.ORIGIN)
    feas = fd_feasible(p, sigma, u, v)
    if feas is Feasibility.INFEASIBLE:
        raise InfeasibleError(f"(u, v) = ({u}, {v}) outside the fermi-dirac zonotope")
    if feas is Feasibility.BOUNDARY:
        return _fd_face_solution(p, sigma, u, v)
    try:
        return _dual_newton_fd(p, sigma, u, v)
    except NumericalFailureError:
        if n <= 4:
            value = brute_force_oracle(Entropy.FERMI_DIRAC, p, sigma, u, v, 400)
            point = _oracle_point(Entropy.FERMI_DIRAC, p, sigma, u, v, 400)
            return FiniteSolution(point, value, None, BoundaryFlag.ORACLE_FALLBACK)
        raise


def _dual_newton_fd(p, sigma, u, v) -> FiniteSolution:
    p = np.asarray(p, dtype=float)
    s = np.asarray(sigma, dtype=float)
    w = v / u
    beta = phi_n_inverse(p, s, w, 1e-12 * max(1.0, abs(w)))
    lp = np.log(p)
    expo = lp + s * beta
    m = float(expo.max())
    alpha = math.log(u) - (m + math.log(float(np.exp(expo - m).sum())))
    a, b = alpha, beta

    def softplus(t_):
        return np.where(t_ > 0.0, t_ + np.log1p(np.exp(-t_)), np.log1p(np.exp(t_)))

    def dual(a_, b_):
        return float((p * softplus(a_ + b_ * s)).sum()) - a_ * u - b_ * v

    def finish(a_, b_, g_):
        u_bar = p * g_
        value = _w_sum(Entropy.FERMI_DIRAC, p, u_bar)
        return FiniteSolution(tuple(u_bar), value, (a_, b_), BoundaryFlag.INTERIOR_KKT)

    best = None
    best_norm = math.inf
    best_it = 0
    d_cur = dual(a, b)
    for it in range(100):
        t = a + b * s
        g = np.where(t >= 0.0, 1.0 / (1.0 + np.exp(-t)), np.exp(t) / (1.0 + np.exp(t)))
        r0 = float((p * g).sum()) - u
        r1 = float((p * s * g).sum()) - v
        norm = max(abs(r0) / max(1.0, u), abs(r1) / max(1.0, abs(v)))
        if norm < best_norm:
            best, best_norm, best_it = (a, b, g), norm, it
        if norm <= 1e-11:
            return finish(a, b, g)
        if it - best_it >= 4:
            if best_norm <= 1e-9:
                return finish(*best)
            raise NumericalFailureError(
                f"fermi-dirac Newton stalled at residual {best_norm:.3e}"
            )
        gp = g * (1.0 - g)
        h00 = float((p * gp).sum())
        h01 = float((p * s * gp).sum())
        h11 = float((p * s * s * gp).sum())
        det = h00 * h11 - h01 * h01
        if det <= 0.0 or not math.isfinite(det):
            raise NumericalFailureError("fermi-dirac dual hessian degenerate")
        da = -(h11 * r0 - h01 * r1) / det
        db = -(-h01 * r0 + h00 * r1) / det
        slope = r0 * da + r1 * db
        in_basin = norm <= 1e-6
        step = 1.0
        stalled = True
        for _ in range(60):
            d_new = dual(a + step * da, b + step * db)
            if in_basin or d_new <= d_cur + 1e-4 * step * slope:
                stalled = False
                break
            step *= 0.5
        if stalled:
            if best_norm <= 1e-9:
                return finish(*best)
            raise NumericalFailureError("fermi-dirac line search stalled")
        a, b, d_cur = a + step * da, b + step * db, d_new
    if best_norm <= 1e-9:
        return finish(*best)
    raise NumericalFailureError("fermi-dirac Newton did not converge in 100 steps")


# ---------------------------------------------------------------------------
# independent grid oracle (n <= 4)


def _w_grid(kind: Entropy, p, cols) -> np.ndarray:
    """Vectorized objective over candidate points; +inf outside dom."""
    total = np.zeros(cols[0].shape)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for pk, uk in zip(p, cols):
            r = uk / pk
            bad = r < 0.0
            if kind is Entropy.FERMI_DIRAC:
                bad |= r > 1.0
            rs = np.clip(r, 1e-300, None)
            if kind is Entropy.MAXWELL_BOLTZMANN:
                w = np.where(r > 0.0, rs * np.log(rs) - r, 0.0)
            elif kind is Entropy.BOSE_EINSTEIN:
                w = np.where(r > 0.0, rs * np.log(rs), 0.0) - (1.0 + np.maximum(r, 0.0)) * np.log1p(np.maximum(r, 0.0))
            else:
                one = np.clip(1.0 - r, 1e-300, None)
                w = np.where(r > 0.0, rs * np.log(rs), 0.0) + np.where(
                    r < 1.0, one * np.log(one), 0.0
                )
            total = total + pk * np.where(bad, np.inf, w)
    return total


def _caps(kind: Entropy, p, u):
    if kind is Entropy.FERMI_DIRAC:
        return [min(pk, u) for pk in p]
    return [u] * len(p)


def _oracle_scan(kind, p, sigma, u, v, grid):
    """Returns (best_value, best_point) over the feasible slice, by gridding
    the free coordinates and solving the two constraints for the rest."""
    n = len(p)
    tol = 1e-9 * max(1.0, abs(u), abs(v))
    if n == 2:
        s1, s2 = sigma
        if s1 != s2:
            u1 = (s2 * u - v) / (s2 - s1)
            u2 = u - u1
            pt = np.array([[u1], [u2]])
            val = _w_grid(kind, p, pt)[0]
            return (val, (u1, u2)) if math.isfinite(val) else (math.inf, None)
        if abs(v - s1 * u) > tol:
            return math.inf, None
        caps = _caps(kind, p, u)
        lo, hi = max(0.0, u - caps[1]), min(u, caps[0])
        best = (math.inf, None)
        for _ in range(6):
            t = np.linspace(lo, hi, grid)
            cols = [t, u - t]
            vals = _w_grid(kind, p, cols)
            j = int(np.argmin(vals))
            if vals[j] < best[0]:
                best = (float(vals[j]), (float(t[j]), float(u - t[j])))
            span = (hi - lo) / (grid - 1)
            lo, hi = max(lo, t[j] - 2 * span), min(hi, t[j] + 2 * span)
        return best

    # eliminate the best-conditioned pair: the widest level gap keeps the
    # feasible band of the remaining grid coordinates thick
    pair = None
    gap = 0.0
    for i_ in range(n):
        for j_ in range(i_ + 1, n):
            if abs(sigma[i_] - sigma[j_]) > gap:
                gap = abs(sigma[i_] - sigma[j_])
                pair = (i_, j_)
    if pair is None or gap == 0.0:
        raise DomainError("oracle requires at least two distinct levels")
    i, j = pair
    free = [k for k in range(n) if k not in pair]
    si, sj = sigma[i], sigma[j]
    det = sj - si
    caps = _caps(kind, p, u)

    def closed(free_vals):
        """Solve u_i, u_j from the two constraints given the free coordinates."""
        ru = u - sum(free_vals)
        rv = v - sum(sigma[k] * t for k, t in zip(free, free_vals))
        ui = (sj * ru - rv) / det
        uj = ru - ui
        return ui, uj

    if len(free) == 1:
        k = free[0]
        lo, hi = 0.0, caps[k]
        best = (math.inf, None)
        for _ in range(6):
            t = np.linspace(lo, hi, grid)
            ru = u - t
            rv = v - sigma[k] * t
            ui = (sj * ru - rv) / det
            uj = ru - ui
            cols = [None] * n
            cols[i], cols[j], cols[k] = ui, uj, t
            vals = _w_grid(kind, p, cols)
            m = int(np.argmin(vals))
            if vals[m] < best[0]:
                best = (
                    float(vals[m]),
                    tuple(float(c[m]) for c in cols),
                )
            span = (hi - lo) / (grid - 1)
            lo, hi = max(0.0, t[m] - 2 * span), min(caps[k], t[m] + 2 * span)
        return best

    # two free coordinates (n = 4)
    k1, k2 = free
    g = max(16, int(math.isqrt(grid)))
    lo1, hi1, lo2, hi2 = 0.0, caps[k1], 0.0, caps[k2]
    best = (math.inf, None)
    for _ in range(6):
        t1 = np.linspace(lo1, hi1, g)
        t2 = np.linspace(lo2, hi2, g)
        a, b = np.meshgrid(t1, t2, indexing="ij")
        a, b = a.ravel(), b.ravel()
        ru = u - a - b
        rv = v - sigma[k1] * a - sigma[k2] * b
        ui = (sj * ru - rv) / det
        uj = ru - ui
        cols = [None] * n
        cols[i], cols[j], cols[k1], cols[k2] = ui, uj, a, b
        vals = _w_grid(kind, p, cols)
        m = int(np.argmin(vals))
        if vals[m] < best[0]:
            best = (float(vals[m]), tuple(float(c[m]) for c in cols))
        s1_ = (hi1 - lo1) / (g - 1)
        s2_ = (hi2 - lo2) / (g - 1)
        lo1, hi1 = max(0.0, a[m] - 2 * s1_), min(caps[k1], a[m] + 2 * s1_)
        lo2, hi2 = max(0.0, b[m] - 2 * s2_), min(caps[k2], b[m] + 2 * s2_)
    return best


def brute_force_oracle(kind: Entropy, p, sigma, u: float, v: float, grid: int = 400) -> float:
    """Grid-refinement minimum of the finite objective over the feasible
    slice; independent verification oracle for n <= 4."""
    if len(p) > 4:
        raise DomainError("oracle is restricted to n <= 4")
    value, point = _oracle_scan(kind, list(map(float, p)), list(map(float, sigma)), u, v, grid)
    if point is None or not math.isfinite(value):
        raise InfeasibleError("oracle found no feasible grid point")
    return value


def _oracle_point(kind, p, sigma, u, v, grid):
    _, point = _oracle_scan(kind, list(map(float, p)), list(map(float, sigma)), u, v, grid)
    if point is None:
        raise InfeasibleError("oracle found no feasible grid point")
    return tuple(max(0.0, x) for x in point)
