#!/usr/bin/env python3
"""Residual sweep and coefficient-spread probe for the factorially scaled counterexample.

Writes the sweep as CSV (and JSON next to it) and prints the spread of
alpha_i m(g_i) for each depth.
"""

import argparse
import json
import math
from pathlib import Path

import numpy as np

from abelexp import lab


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=5)
    ap.add_argument("--max-translates", type=int, default=6)
    ap.add_argument("--out", type=Path, default=Path("lab_sweep.csv"))
    args = ap.parse_args()

    reports = lab.baseline_sweep(args.depth, args.max_translates)
    args.out.write_text(lab.reports_to_csv(reports))
    args.out.with_suffix(".json").write_text(json.dumps([r.to_dict() for r in reports], indent=2) + "\n")
    print(f"wrote {args.out} and {args.out.with_suffix('.json')}")
    for rep in reports:
        lam = complex(rep.exponential_base)
        n = int(np.argmax(rep.target_vector)) + 1
        res = " ".join(f"{r:.4g}" for r in rep.residuals)
        flag = " (ill-conditioned)" if any(rep.flagged) else ""
        print(f"lambda={lam.real:+g} e=u_{n}: {res}{flag}")

    inst = lab.build_counterexample(args.depth, lab.required_window(args.max_translates))
    ctrl = max(
        lab.membership_control(inst, j, t, lab.sweep_points(t)).residual
        for t in range(1, args.max_translates + 1)
        for j in range(1, t + 1)
    )
    print(f"membership control: max residual {ctrl:.2e}")

    print("\ndepth,lambda,spread_deviation,fitted_deviation,fit_gap")
    for depth in range(3, lab.MAX_DEPTH + 1):
        inst = lab.build_counterexample(depth, lab.required_window(depth))
        e = np.ones(depth) / math.sqrt(depth)
        for lam in (1, 2, -1):
            p = lab.coefficient_spread(inst, lam, e)
            print(f"{depth},{lam},{p.deviation:.6g},{p.fitted_ratio - 1:.3g},{p.fit_gap:.3g}")


if __name__ == "__main__":
    main()
