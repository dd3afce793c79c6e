#!/usr/bin/env python3
"""Emit the Lambda-versus-naive comparison CSV over a square density grid."""

import argparse
import sys

from logicast.simlab import sweep_lambda_vs_naive


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--start", type=float, default=0.02)
    ap.add_argument("--step", type=float, default=0.02)
    ap.add_argument("--stop", type=float, default=0.40)
    ap.add_argument("--n", type=int, default=4096,
                    help="block length for the finite-n linear rate column")
    ap.add_argument("--out", help="write the CSV here instead of stdout")
    args = ap.parse_args()
    count = int(round((args.stop - args.start) / args.step)) + 1
    axis = [round(args.start + i * args.step, 12) for i in range(count)]
    pairs = [(a, b) for a in axis for b in axis if a + b <= 1.0]
    text = sweep_lambda_vs_naive(pairs, n=args.n)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
