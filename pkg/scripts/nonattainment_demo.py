#!/usr/bin/env python3
"""Demonstrate finite value without a minimizer beyond the slope bound.

For the family p_n = e^n/n^3, sigma_n = n the slope bound theta2 =
zeta(2)/zeta(3) is finite: targets with v > theta2 u have a finite value
yet no optimal sequence.  The script prints the truncated feasible
sequences whose objectives walk down to that value, and shows that the
closed-form boundary candidate matches the first constraint but locks its
second moment at theta2 u.

Usage:
    python scripts/nonattainment_demo.py [--u 1.0] [--v 2.0]
"""

import argparse
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from entromin import EmpSolver, WeightedGeometric


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--u", type=float, default=1.0)
    ap.add_argument("--v", type=float, default=2.0)
    args = ap.parse_args()

    solver = EmpSolver(WeightedGeometric(1.0, 3.0))
    prof = solver.profile
    print(f"family profile: alpha={prof.alpha}, theta1={prof.theta1}, "
          f"theta2={prof.theta2:.12f} (= zeta(2)/zeta(3))")

    sol = solver.solve_mb(args.u, args.v)
    print(f"target (u, v) = ({args.u}, {args.v}): region {sol.region.value}")
    print(f"value H(u, v) = {sol.value:.12f}, attained: {sol.attained}")
    if sol.epsilon_family is None:
        print("target lies inside the attainment cone; nothing more to show")
        return 0

    print("\n  n      lambda_n        objective         gap to value")
    n = 8
    while n <= 2**15:
        try:
            m = sol.epsilon_family.member(n)
        except Exception:
            n *= 2
            continue
        print(f"{m.n:>7}  {m.lam:.10f}  {m.objective:+.10f}  {m.objective - sol.value:.3e}")
        n *= 2

    x = math.log(args.u / prof.f_at_boundary)
    print(f"\nboundary candidate x = ln(u/f(-alpha)) = {x:.10f}")
    print(f"its second moment is theta2*u = {prof.theta2 * args.u:.10f} "
          f"!= v = {args.v}: the candidate is infeasible for this target,")
    print("so the infimum is approached only along the truncations above.")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
