#!/usr/bin/env python3
"""Monte Carlo check that posteriors reach the conditioned prior.

Runs many seeded trajectories of a noisy two-realization signal whose rows
coincide exactly on the diagonal of a 2x2 grid, and tabulates the total
variation distance to the limit posterior at a few horizons.

Usage: python scripts/run_convergence_study.py [--runs 100] [--horizon 500]
"""
import argparse
import sys
from fractions import Fraction

from bayespol import Belief, LikelihoodFn, Signal, StateSpace, simulate

CHECKPOINT_EVERY = 100


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=100)
    parser.add_argument("--horizon", type=int, default=500)
    parser.add_argument("--tolerance", default="1/1000")
    args = parser.parse_args()
    tolerance = Fraction(args.tolerance)

    space = StateSpace.grid(2, 2)
    prior = Belief.from_fractions(space, ["3/8", "1/4", "1/4", "1/8"])
    signal = Signal(
        space,
        ("a", "b"),
        (
            LikelihoodFn.from_fractions(space, ["1/2", "1/4", "3/4", "1/2"]),
            LikelihoodFn.from_fractions(space, ["1/2", "3/4", "1/4", "1/2"]),
        ),
    )

    checkpoints = list(range(0, args.horizon + 1, CHECKPOINT_EVERY))
    print("seed\t" + "\t".join(f"tv@{t}" for t in checkpoints))
    converged = 0
    for seed in range(args.runs):
        records = simulate(prior, signal, (0, 0), args.horizon, seed=seed)
        row = [f"{float(records[t].tv_to_limit):.2e}" for t in checkpoints]
        print(f"{seed}\t" + "\t".join(row))
        if records[-1].tv_to_limit < tolerance:
            converged += 1
    print(
        f"# {converged}/{args.runs} runs within {args.tolerance} after {args.horizon} steps",
        file=sys.stderr,
    )
    return 0 if converged >= args.runs - 1 else 1


if __name__ == "__main__":
    sys.exit(main())
