#!/usr/bin/env python3
"""Convergence of the Stieltjes-Perron recovery against the exact solution.

Halves the smoothing parameter and the grid step together and tabulates the
atom-location and total-mass errors in the reference coordinates.
"""

import argparse

import numpy as np

from matmom import (
    MomentSequence,
    build_gram_space,
    build_operators,
    extremal_extensions,
    solve_odd,
    stieltjes_perron_recover,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--levels", type=int, default=4)
    parser.add_argument("--eps0", type=float, default=8e-4)
    parser.add_argument("--k", type=float, default=0.5)
    args = parser.parse_args()

    eye = np.eye(1)
    seq = MomentSequence(0.0, 1.0, (eye, eye / 2, eye / 3))
    interval = extremal_extensions(build_operators(build_gram_space(seq)))
    exact = solve_odd(seq, args.k)
    half_width = 0.5 * (seq.b - seq.a)
    lam_exact = (exact.positions - 0.5 * (seq.a + seq.b)) / half_width
    mass_exact = np.trace(exact.total_mass()).real

    print(f"exact atoms (reference coords): {np.round(lam_exact, 10)}")
    print(f"{'eps=step':>12} {'atoms':>5} {'location err':>14} {'mass err':>12}")
    eps = args.eps0
    for _ in range(args.levels):
        rec = stieltjes_perron_recover(interval, args.k, eps=eps, step=eps)
        if rec.num_atoms == lam_exact.size:
            loc_err = np.abs(rec.positions - lam_exact).max()
        else:
            loc_err = float("nan")
        mass_err = abs(np.trace(rec.total_mass()).real - mass_exact)
        print(f"{eps:12.1e} {rec.num_atoms:5d} {loc_err:14.3e} {mass_err:12.3e}")
        eps /= 2.0


if __name__ == "__main__":
    main()
