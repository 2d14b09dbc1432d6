#!/usr/bin/env python3
"""Reproduce the benchmark runtime/unique-count table.

Rows: DS98 (J=100, I=5, T=5), single A_10 (J=1000, I=8, T=32), and the
split A_10 experiment (two runs from opposite corners, J=1000, I=8, T=24,
union-merged).  Pass --full to add the Q=10 no-three-way sweep rows
(S = 1 / 0.65 / 0.35, J=100, I=25, T=50), which take a few minutes.
"""

import argparse
import time

import rumba
from rumba.sampler import FiberStore, RunConfig, rumba as run_rumba


def timed_run(inst, cfg):
    start = time.perf_counter()
    fiber, _, _ = run_rumba(cfg, inst.a, inst.rhs, inst.x0,
                            basis=inst.structured_basis)
    return fiber, time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--full", action="store_true",
                        help="include the Q=10 sparsity rows")
    args = parser.parse_args()

    rows = []

    ds98 = rumba.ds98_instance()
    fiber, secs = timed_run(ds98, RunConfig(steps=5, iterations=5, samples=100,
                                            seed=args.seed))
    rows.append(("DS98 100/5/5", secs, len(fiber)))

    single = rumba.ak_model(10)
    fiber, secs = timed_run(single, RunConfig(steps=32, iterations=8,
                                              samples=1000, seed=args.seed))
    rows.append(("Single A_10 1000/8/32", secs, len(fiber)))

    merged = FiberStore(single.a.cols)
    total = 0.0
    for alt, seed in ((False, 2 * args.seed), (True, 2 * args.seed + 1)):
        inst = rumba.ak_model(10, alternate_start=alt)
        fiber, secs = timed_run(inst, RunConfig(steps=24, iterations=8,
                                                samples=1000, seed=seed))
        merged.union_update(fiber)
        total += secs
    rows.append(("Split A_10 1000/8/24", total, len(merged)))

    if args.full:
        for s in (1.0, 0.65, 0.35):
            inst = rumba.no3way_model(10, rumba.sparse_table(10, s, args.seed))
            fiber, secs = timed_run(inst, RunConfig(steps=50, iterations=25,
                                                    samples=100, seed=args.seed))
            rows.append((f"Q=10 S={s} 100/25/50", secs, len(fiber)))

    width = max(len(r[0]) for r in rows)
    print(f"{'instance (J/I/T)':<{width}}  {'runtime':>9}  unique")
    for label, secs, unique in rows:
        print(f"{label:<{width}}  {secs:8.2f}s  {unique}")


if __name__ == "__main__":
    main()
