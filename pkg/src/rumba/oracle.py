"""Brute-force fiber enumeration: ground truth for small instances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .intlinalg import IntMatrix


class FiberLimitExceeded(RuntimeError):
    """Enumeration produced more elements than the caller allowed."""


def auto_box_bound(a: IntMatrix, u: np.ndarray) -> np.ndarray:
    """Per-coordinate bounds x_j <= min_{i: A_ij > 0} u_i / A_ij.

    Only valid for nonnegative A and u, where every feasible x is boxed by
    the constraints themselves.
    """
    u = np.asarray(u, dtype=np.int64)
    if np.any(a.data < 0) or np.any(u < 0):
        raise ValueError("automatic bounds require A >= 0 and u >= 0")
    bounds = np.empty(a.cols, dtype=np.int64)
    for j in range(a.cols):
        pos = a.data[:, j] > 0
        if not pos.any():
            raise ValueError(f"column {j} has no positive entry; bound unresolvable")
        bounds[j] = int((u[pos] // a.data[pos, j]).min())
    return bounds


def enumerate_fiber(a: IntMatrix, u: np.ndarray, bound=None,
                    limit: int = 10**7, order=None) -> set[tuple[int, ...]]:
    """All x with 0 <= x <= bound and A x = u, by pruned depth-first search.

    ``bound`` is a per-coordinate vector, a scalar, or None for automatic
    bounds (requires A, u >= 0).  Raises FiberLimitExceeded when the result
    would exceed ``limit``.  ``order`` optionally permutes the coordinate
    assignment order (results are order-independent; used in tests).
    """
    u = np.asarray(u, dtype=np.int64)
    if u.shape != (a.rows,):
        raise ValueError(f"u has shape {u.shape}, expected ({a.rows},)")
    if bound is None:
        bound = auto_box_bound(a, u)
    else:
        bound = np.broadcast_to(np.asarray(bound, dtype=np.int64), (a.cols,)).copy()
    if np.any(bound < 0):
        raise ValueError("bounds must be nonnegative")

    m = a.cols
    if order is None:
        # Assign the most-constrained coordinates first: columns touching
        # many constraints tighten the residual intervals early and keep
        # the search shallow.  Stable sort keeps the result deterministic.
        support = (a.data != 0).sum(axis=0)
        order = list(np.argsort(-support, kind="stable"))
    else:
        order = list(order)
    cols = [a.data[:, j].astype(np.int64) for j in order]
    ubs = [int(bound[j]) for j in order]

    # suffix_min[d] / suffix_max[d]: extreme achievable contribution of
    # coordinates d.. to each constraint, given the box.
    n = a.rows
    suffix_min = np.zeros((m + 1, n), dtype=np.int64)
    suffix_max = np.zeros((m + 1, n), dtype=np.int64)
    for d in range(m - 1, -1, -1):
        contrib = cols[d] * ubs[d]
        suffix_min[d] = suffix_min[d + 1] + np.minimum(contrib, 0)
        suffix_max[d] = suffix_max[d + 1] + np.maximum(contrib, 0)

    results: set[tuple[int, ...]] = set()
    x = [0] * m

    def dfs(d: int, residual: np.ndarray) -> None:
        if np.any(residual < suffix_min[d]) or np.any(residual > suffix_max[d]):
            return
        if d == m:
            if not residual.any():
                full = [0] * m
                for pos, j in enumerate(order):
                    full[j] = x[pos]
                results.add(tuple(full))
                if len(results) > limit:
                    raise FiberLimitExceeded(
                        f"fiber has more than {limit} elements")
            return
        col = cols[d]
        r = residual.copy()
        for v in range(ubs[d] + 1):
            x[d] = v
            dfs(d + 1, r)
            r = r - col
        x[d] = 0

    dfs(0, u.copy())
    return results


@dataclass(frozen=True)
class CoverageReport:
    sound: bool
    coverage: float
    missing: tuple[tuple[int, ...], ...]
    extra: tuple[tuple[int, ...], ...]


def verify_subset(sampled, oracle_fiber: set) -> CoverageReport:
    """Compare discovered elements against an exact fiber.

    ``sampled`` may be a FiberStore or any iterable of vectors.  Any
    sampled element outside the oracle set is a soundness failure.
    """
    elements = getattr(sampled, "elements", sampled)
    sampled_set = {tuple(int(v) for v in x) for x in elements}
    extra = tuple(sorted(sampled_set - oracle_fiber))
    missing = tuple(sorted(oracle_fiber - sampled_set))
    coverage = len(sampled_set & oracle_fiber) / len(oracle_fiber) if oracle_fiber else 1.0
    return CoverageReport(sound=not extra, coverage=coverage,
                          missing=missing, extra=extra)
