#!/usr/bin/env python3
"""Round-trip sweep: random measures -> moments -> solve -> verify.

Reports the worst verification residual over the sweep, broken down by block
size, and the total runtime.
"""

import argparse
import time
from collections import defaultdict

import numpy as np

from matmom import check_odd, gen_random_measure, moments_of, solve_odd, verify


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--seed0", type=int, default=0)
    parser.add_argument("--max-N", type=int, default=3)
    parser.add_argument("--max-atoms", type=int, default=4)
    parser.add_argument("--max-d", type=int, default=3)
    parser.add_argument("--k", type=float, default=0.5)
    args = parser.parse_args()

    worst = defaultdict(float)
    start = time.monotonic()
    for seed in range(args.seed0, args.seed0 + args.count):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, args.max_N + 1))
        atoms = int(rng.integers(1, args.max_atoms + 1))
        d = int(rng.integers(1, args.max_d + 1))
        a, b = (0.0, 1.0) if seed % 2 else (-2.0, 3.0)
        mu = gen_random_measure(seed, n, atoms, a, b)
        seq = moments_of(mu, 2 * d)
        report = check_odd(seq)
        if not report.solvable:
            print(f"seed {seed}: UNSOLVABLE {report.failed_conditions}")
            continue
        measure = solve_odd(seq, args.k)
        outcome = verify(measure, seq, tol=1e-8)
        worst[n] = max(worst[n], outcome.max_relative_residual)
        if not outcome.passed:
            print(f"seed {seed}: VERIFY FAILED ({outcome.max_relative_residual:.3e})")
    elapsed = time.monotonic() - start

    print(f"{args.count} instances in {elapsed:.2f}s")
    for n in sorted(worst):
        print(f"  N={n}: worst relative residual {worst[n]:.3e}")


if __name__ == "__main__":
    main()
