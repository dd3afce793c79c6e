#!/usr/bin/env python3
"""Run the default scenario/law matrix and print one rate report per cell."""

import argparse
import sys
import time

from logicast.simlab import DEFAULT_MATRIX, run_trials


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=None,
                    help="override the per-cell trial counts")
    args = ap.parse_args()
    for scenario, law, m, codec, trials in DEFAULT_MATRIX:
        start = time.perf_counter()
        rep = run_trials(scenario, law, m, trials=args.trials or trials,
                         codec=codec, seed=args.seed)
        print(rep.to_text(), end="")
        print(f"seconds={time.perf_counter() - start:.1f}")
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
