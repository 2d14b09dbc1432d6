"""Command-line driver: run the sampler, enumerate small fibers, generate instances.

Exit codes: 0 success, 2 input/validation error, 3 resource/limit error,
4 arithmetic overflow.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import io, models, oracle
from .intlinalg import IntegerOverflowError, IntMatrix, LatticeBasis, mat_vec
from .sampler import FiberStore, InfeasibleStartError, RunConfig, rumba

log = logging.getLogger("rumba")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_LIMIT = 3
EXIT_OVERFLOW = 4


def _setup_logging() -> None:
    level = os.environ.get("RUMBA_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["ds98", "independence", "no3way", "ak"],
                   help="built-in instance family")
    p.add_argument("--Q", type=int, help="table side for independence/no3way")
    p.add_argument("--S", type=float, help="sparsity for generated no3way tables")
    p.add_argument("--k", type=int, help="segment count for the ak family")
    p.add_argument("--table", help="table file (matrix format) for independence/no3way")
    p.add_argument("--gen-seed", type=int, default=0,
                   help="seed for generated sparse tables")
    p.add_argument("--x1", action="store_true",
                   help="use the alternate ak starting point")
    p.add_argument("--matrix", help="constraint matrix file")
    p.add_argument("--rhs", help="right-hand-side vector file")
    p.add_argument("--x0", help="feasible point vector file")
    p.add_argument("--basis", help="optional move basis file (columns are moves)")


def _require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"{what} file not found: {path}")
    return p


def load_instance(args) -> models.ModelInstance:
    if args.family and args.matrix:
        raise ValueError("give either --family or --matrix/--rhs/--x0, not both")
    if args.family:
        return _family_instance(args)
    if not args.matrix:
        raise ValueError("an instance source is required (--family or --matrix)")
    if not args.x0:
        raise ValueError("--x0 is required with --matrix")
    a = io.read_matrix(_require_file(args.matrix, "matrix"))
    x0 = io.read_vector(_require_file(args.x0, "x0"))
    if args.rhs:
        u = io.read_vector(_require_file(args.rhs, "rhs"))
    else:
        u = mat_vec(a, x0)
    basis = None
    if args.basis:
        basis = LatticeBasis(io.read_matrix(_require_file(args.basis, "basis")),
                             source="user-supplied")
    return models.ModelInstance(a, u, x0, structured_basis=basis, label="file")


def _family_instance(args) -> models.ModelInstance:
    if args.family == "ds98":
        return models.ds98_instance()
    if args.family == "independence":
        if not args.table:
            raise ValueError("independence requires --table")
        table = io.read_matrix(_require_file(args.table, "table")).data
        return models.independence_model(table.shape[0], table.shape[1], table)
    if args.family == "no3way":
        if args.Q is None:
            raise ValueError("no3way requires --Q")
        if args.table:
            flat = io.read_matrix(_require_file(args.table, "table")).data
            table = flat.reshape(args.Q, args.Q, args.Q)
        else:
            sparsity = args.S if args.S is not None else 1.0
            table = models.sparse_table(args.Q, sparsity, args.gen_seed)
        return models.no3way_model(args.Q, table)
    if args.family == "ak":
        if args.k is None:
            raise ValueError("ak requires --k")
        return models.ak_model(args.k, alternate_start=args.x1)
    raise ValueError(f"unknown family {args.family!r}")


def cmd_run(args) -> int:
    instance = load_instance(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    emit = set(args.emit.split(","))
    unknown = emit - {"metrics", "fiber", "summary"}
    if unknown:
        raise ValueError(f"unknown emit targets: {sorted(unknown)}")

    alpha0 = None
    if args.alpha0 is not None:
        alpha0 = (io.read_vector(args.alpha0).astype(np.float64)
                  if Path(args.alpha0).is_file() else float(args.alpha0))
    pi_policy = _parse_pi(args.pi)

    def make_config(seed: int) -> RunConfig:
        return RunConfig(steps=args.T, iterations=args.I, samples=args.J,
                         seed=seed, alpha0_plus=alpha0, alpha0_minus=alpha0,
                         beta0_plus=args.beta0, beta0_minus=args.beta0,
                         pi_policy=pi_policy)

    seeds = _replicate_seeds(args.seed, args.replicates)
    basis = instance.structured_basis
    start = time.perf_counter()
    if args.replicates == 1:
        results = [rumba(make_config(seeds[0]), instance.a, instance.rhs,
                         instance.x0, basis=basis)]
    else:
        with ThreadPoolExecutor(max_workers=args.replicates) as pool:
            futures = [pool.submit(rumba, make_config(s), instance.a,
                                   instance.rhs, instance.x0, basis=basis)
                       for s in seeds]
            results = [f.result() for f in futures]
    runtime = time.perf_counter() - start

    merged = FiberStore(instance.a.cols)
    for fiber, _, _ in results:
        merged.union_update(fiber)

    if "metrics" in emit:
        if args.replicates == 1:
            results[0][1].write_csv(out_dir / "metrics.csv")
        else:
            for r, (_, metrics, _) in enumerate(results):
                metrics.write_csv(out_dir / f"metrics_r{r}.csv")
    if "fiber" in emit:
        io.write_fiber_dump(out_dir / "fiber.txt", merged.elements,
                            instance.a.cols, args.seed)
    if "summary" in emit:
        summary = {
            "label": instance.label,
            "J": args.J, "I": args.I, "T": args.T,
            "seeds": [int(s) for s in seeds],
            "replicates": args.replicates,
            "runtime_seconds": runtime,
            "unique_elements": len(merged),
        }
        (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    log.info("run %s: %d unique elements in %.3fs", instance.label, len(merged), runtime)
    return EXIT_OK


def _parse_pi(text: str):
    if text == "indicator":
        return "indicator"
    if text.startswith("fixed:"):
        return float(text.split(":", 1)[1])
    raise ValueError(f"--pi must be 'indicator' or 'fixed:<p>', got {text!r}")


def _replicate_seeds(seed: int, replicates: int) -> list[int]:
    """Derive one 64-bit seed per replicate from the base seed (SeedSequence spawn)."""
    if replicates == 1:
        return [seed]
    children = np.random.SeedSequence(seed).spawn(replicates)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def cmd_enumerate(args) -> int:
    instance = load_instance(args)
    bound = None if args.bound is None else np.int64(args.bound)
    fiber = oracle.enumerate_fiber(instance.a, instance.rhs, bound=bound,
                                   limit=args.limit)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    elements = sorted(fiber)
    io.write_fiber_dump(out_dir / "fiber.txt", elements, instance.a.cols, "exact")
    (out_dir / "count.txt").write_text(f"{len(elements)}\n")
    print(len(elements))
    return EXIT_OK


def cmd_gen(args) -> int:
    instance = load_instance(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    io.write_matrix(out_dir / "A.txt", instance.a, comment=instance.label)
    io.write_vector(out_dir / "u.txt", instance.rhs, comment=instance.label)
    io.write_vector(out_dir / "x0.txt", instance.x0, comment=instance.label)
    if instance.structured_basis is not None:
        io.write_matrix(out_dir / "B.txt", instance.structured_basis.basis_matrix,
                        comment=f"{instance.label} structured basis")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rumba",
                                     description="Adaptive fiber sampler for Ax = u over nonnegative integers")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the adaptive sampler")
    _add_instance_args(run)
    run.add_argument("-T", type=int, default=10, help="number of steps")
    run.add_argument("-I", type=int, default=5, help="iterations per step")
    run.add_argument("-J", type=int, default=100, help="samples per iteration")
    run.add_argument("--alpha0", help="initial shape: scalar or per-move vector file "
                                      "(default 1/K)")
    run.add_argument("--beta0", type=float, default=1.0, help="initial rate")
    run.add_argument("--pi", default="indicator",
                     help="selection policy: 'indicator' or 'fixed:<p>'")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--replicates", type=int, default=1,
                     help="independent chains, union-merged")
    run.add_argument("--out", default=".", help="output directory")
    run.add_argument("--emit", default="metrics,fiber,summary",
                     help="comma list of outputs: metrics,fiber,summary")
    run.set_defaults(func=cmd_run)

    enum = sub.add_parser("enumerate", help="exhaustively enumerate a small fiber")
    _add_instance_args(enum)
    enum.add_argument("--bound", type=int, default=None,
                      help="uniform coordinate bound (default: automatic)")
    enum.add_argument("--limit", type=int, default=10**7)
    enum.add_argument("--out", default=".", help="output directory")
    enum.set_defaults(func=cmd_enumerate)

    gen = sub.add_parser("gen", help="write instance files for a built-in family")
    _add_instance_args(gen)
    gen.add_argument("--out", default=".", help="output directory")
    gen.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except oracle.FiberLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except IntegerOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except (InfeasibleStartError, ValueError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
