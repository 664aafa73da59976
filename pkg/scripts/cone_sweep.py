#!/usr/bin/env python3
"""Sweep the value function over the attainment cone and probe its convexity.

Writes a CSV of H(u, v) over a grid for the chosen family, then samples
random segment midpoints and reports the worst midpoint-convexity excess
(a correct solver never shows a positive excess beyond rounding).

Usage:
    python scripts/cone_sweep.py [--family geometric|zeta|lattice]
                                 [--steps 25] [--out sweep.csv]
"""

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from entromin import Arithmetic, EmpSolver, Lattice3D, WeightedGeometric

FAMILIES = {
    "geometric": lambda: Arithmetic(0.0, 1.0),
    "zeta": lambda: WeightedGeometric(1.0, 3.0),
    "lattice": lambda: Lattice3D(1.0),
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=sorted(FAMILIES), default="geometric")
    ap.add_argument("--steps", type=int, default=25)
    ap.add_argument("--out", default="sweep.csv")
    args = ap.parse_args()

    solver = EmpSolver(FAMILIES[args.family]())
    prof = solver.profile
    w_hi = prof.theta2 * 1.5 if math.isfinite(prof.theta2) else prof.theta1 * 6.0

    rows = []
    for u in np.linspace(0.2, 3.0, args.steps):
        for w in np.linspace(prof.theta1 * 0.8, w_hi, args.steps):
            v = float(u * w)
            region = solver.classify(float(u), v)
            value = solver.value_mb(float(u), v)
            rows.append((float(u), v, region.value, value))

    def fmt(x):
        if math.isinf(x):
            return "+inf" if x > 0 else "-inf"
        return repr(x)

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["u", "v", "region", "value"])
        for u, v, region, value in rows:
            writer.writerow([fmt(u), fmt(v), region, fmt(value)])
    print(f"wrote {len(rows)} rows to {args.out}")

    rng = np.random.default_rng(0)
    worst = -math.inf
    for _ in range(400):
        u1, u2 = rng.uniform(0.2, 3.0, 2)
        w1, w2 = rng.uniform(prof.theta1 * 1.05, w_hi, 2)
        a = (float(u1), float(w1 * u1))
        b = (float(u2), float(w2 * u2))
        mid = (0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]))
        excess = solver.value_mb(*mid) - 0.5 * (
            solver.value_mb(*a) + solver.value_mb(*b)
        )
        worst = max(worst, excess)
    print(f"worst midpoint-convexity excess over 400 segments: {worst:.3e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
