#!/usr/bin/env python3
"""Time the difference-operator and interpolation backends on random instances."""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from abelexp import extract_components_ops, extract_components_solve, lemma2_operators, parse_group  # noqa: E402

import gen  # noqa: E402


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--group", default="Z")
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    G = parse_group(args.group)
    rng = random.Random(args.seed)

    print("n,s,operators,ops_ms,solve_ms,agree")
    for n in (1, 2, 3):
        for s in range(0, 4):
            t_ops = t_sol = 0.0
            agree = True
            nops = 0
            for _ in range(args.trials):
                f = gen.rand_expopoly(rng, G, 1, 4, n, max(0, s - n + 1) if n > 1 else s)
                ms = f.exponentials()
                if len(ms) != n:
                    continue
                s_eff = max(s, sum(p.degree for _, p in f.terms))
                nops = len(lemma2_operators(ms, s_eff))
                t0 = time.perf_counter()
                a = extract_components_ops(f, ms, s_eff)
                t1 = time.perf_counter()
                b = extract_components_solve(f, ms, s_eff)
                t2 = time.perf_counter()
                t_ops += t1 - t0
                t_sol += t2 - t1
                agree &= a == b
            k = max(args.trials, 1)
            print(f"{n},{s},{nops},{1000 * t_ops / k:.1f},{1000 * t_sol / k:.1f},{agree}")


if __name__ == "__main__":
    main()
