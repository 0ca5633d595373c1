#!/usr/bin/env python3
"""Translate-span dimensions of sums of squares, and deg f vs dim L_f on random inputs."""

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from abelexp import degree, n_of_f_bounds, parse, parse_group, translate_span  # noqa: E402

import gen  # noqa: E402


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-rank", type=int, default=5)
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("r,dim_L_f,N_lower,N_upper")
    for r in range(1, args.max_rank + 1):
        G = parse_group(f"Z^{r}")
        f = parse(" + ".join(f"x{i}^2" for i in range(1, r + 1)), G, 4)
        lo, hi = n_of_f_bounds(f)
        print(f"{r},{translate_span(f).dim},{lo},{hi}")

    rng = random.Random(args.seed)
    gaps = []
    for _ in range(args.samples):
        G = parse_group(f"Z^{rng.randint(1, 3)}")
        f = gen.rand_genpoly(rng, G, rng.randint(1, 2), 4, rng.randint(0, 4))
        gaps.append(translate_span(f).dim - degree(f))
    print(f"\nrandom generalized polynomials: {len(gaps)} samples, min(dim - deg) = {min(gaps)}, max = {max(gaps)}")


if __name__ == "__main__":
    main()
