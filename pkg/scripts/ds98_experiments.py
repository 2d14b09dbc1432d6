#!/usr/bin/env python3
"""Run the 4x4 independence benchmark and write metrics for plotting.

Default budget is the short run (J=100, I=5, T=5); --large switches to the
3,000,000-sample configuration (J=1000, I=15, T=200), which takes several
minutes and discovers over a million unique fiber elements.  Output goes
to <out>/metrics.csv, <out>/fiber.txt, <out>/summary.json via the CLI.
"""

import argparse
import sys

from rumba import cli


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--large", action="store_true")
    parser.add_argument("--out", default="results/ds98")
    args = parser.parse_args()

    t, i, j = (200, 15, 1000) if args.large else (5, 5, 100)
    return cli.main(["run", "--family", "ds98",
                     "-T", str(t), "-I", str(i), "-J", str(j),
                     "--seed", str(args.seed), "--out", args.out])


if __name__ == "__main__":
    sys.exit(main())
