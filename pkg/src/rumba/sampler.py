"""The three nested sampling loops: batch sampling, parameter updates, steps.

One *step* starts from a fiber element x_t, runs a number of parameter
update *iterations*, each of which draws a batch of *samples*; the step
ends by picking the next starting element from what was discovered.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .distributions import GammaParams, sample_coefficient_batch
from .intlinalg import (
    IntegerOverflowError,
    IntMatrix,
    LatticeBasis,
    kernel_lattice_basis,
    mat_mul,
    mat_vec,
)

_FLOAT_EXACT_LIMIT = 2**53  # integer sums below this are exact in float64


class InfeasibleStartError(ValueError):
    """x0 is not a nonnegative solution of A x = u."""


class FiberStore:
    """Deduplicated set of discovered fiber elements with per-step partitions.

    Membership is keyed on the raw int64 bytes of the full vector, which is
    exact for fixed dimension.  ``step_new[t]`` holds the indices of the
    elements first discovered during step t (the starting element is step-0
    content and never appears in a new-list).
    """

    def __init__(self, num_vars: int, checker=None):
        self.num_vars = num_vars
        self.elements: list[np.ndarray] = []
        self.step_new: list[list[int]] = [[]]  # index 0 = step 0 (just x0)
        self._index: dict[bytes, int] = {}
        self._checker = checker

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return np.ascontiguousarray(x, dtype=np.int64).tobytes() in self._index

    def begin_step(self) -> None:
        self.step_new.append([])

    def add(self, x: np.ndarray) -> bool:
        """Insert x if new; returns True when x was not already stored."""
        arr = np.ascontiguousarray(x, dtype=np.int64)
        if arr.shape != (self.num_vars,):
            raise ValueError(f"element has shape {arr.shape}, expected ({self.num_vars},)")
        key = arr.tobytes()
        if key in self._index:
            return False
        if self._checker is not None:
            self._checker(arr)
        arr = arr.copy()
        arr.setflags(write=False)
        self._index[key] = len(self.elements)
        self.elements.append(arr)
        self.step_new[-1].append(self._index[key])
        return True

    def new_in_current_step(self) -> list[int]:
        return self.step_new[-1]

    def union_update(self, other: "FiberStore") -> None:
        """Set-union merge (replicate runs); step partitions are not merged."""
        for x in other.elements:
            self.add(x)


@dataclass
class IterationRecord:
    step: int
    iteration: int
    samples_in_fiber: int
    new_points: int
    cumulative_unique: int
    step_new_so_far: int
    elapsed_ms: float


@dataclass
class StepRecord:
    step: int
    new_points: int
    cumulative_unique: int
    elapsed_ms: float


@dataclass
class RunMetrics:
    rows: list[IterationRecord] = field(default_factory=list)
    steps: list[StepRecord] = field(default_factory=list)

    CSV_COLUMNS = ("step", "iteration", "samples_in_fiber", "new_points",
                   "cumulative_unique", "step_new_so_far", "elapsed_ms")

    def write_csv(self, path) -> None:
        lines = [",".join(self.CSV_COLUMNS)]
        for r in self.rows:
            lines.append(f"{r.step},{r.iteration},{r.samples_in_fiber},{r.new_points},"
                         f"{r.cumulative_unique},{r.step_new_so_far},{r.elapsed_ms:.3f}")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


@dataclass
class RunConfig:
    """Budget and prior configuration for one sampler run."""

    steps: int
    iterations: int
    samples: int
    seed: int
    alpha0_plus: float | np.ndarray | None = None
    alpha0_minus: float | np.ndarray | None = None
    beta0_plus: float | np.ndarray = 1.0
    beta0_minus: float | np.ndarray = 1.0
    pi_policy: str | float = "indicator"

    def __post_init__(self):
        if min(self.steps, self.iterations, self.samples) < 1:
            raise ValueError("steps, iterations, and samples must all be >= 1")
        if isinstance(self.pi_policy, str):
            if self.pi_policy != "indicator":
                raise ValueError(f"unknown selection policy {self.pi_policy!r}")
        else:
            p = float(self.pi_policy)
            if not (0.0 <= p <= 1.0):
                raise ValueError("fixed selection probability must lie in [0, 1]")

    def initial_params(self, k: int) -> GammaParams:
        def expand(v, default):
            if v is None:
                return default(k)
            arr = np.asarray(v, dtype=np.float64)
            return np.full(k, float(arr)) if arr.ndim == 0 else arr.copy()

        ap = expand(self.alpha0_plus, lambda k: np.full(k, 1.0 / k) if k else np.zeros(0))
        am = expand(self.alpha0_minus, lambda k: ap.copy())
        bp = expand(self.beta0_plus, None)
        bm = expand(self.beta0_minus, None)
        for name, arr in (("alpha0_plus", ap), ("alpha0_minus", am),
                          ("beta0_plus", bp), ("beta0_minus", bm)):
            if arr.shape != (k,):
                raise ValueError(f"{name} must be scalar or length {k}")
        return GammaParams(ap, am, bp, bm)


@dataclass
class IterationStats:
    """What one batch produced, including replay data when logging."""

    samples_in_fiber: int
    new_points: int
    accepted_plus: np.ndarray | None = None
    accepted_minus: np.ndarray | None = None
    rates_plus: np.ndarray | None = None
    rates_minus: np.ndarray | None = None


def batch_moves(basis: np.ndarray, coeffs: np.ndarray, x_t: np.ndarray) -> np.ndarray:
    """Exact rows x_t + B y for each coefficient row y, overflow-checked.

    Uses float64 BLAS when a conservative bound proves every partial sum is
    below 2^53 (hence exactly representable); falls back to exact python
    integers otherwise.
    """
    if coeffs.shape[1] != basis.shape[1]:
        raise ValueError("coefficient length does not match basis column count")
    b_max = int(np.abs(basis).max(initial=0))
    row_mass = np.abs(coeffs).sum(axis=1, dtype=np.int64)
    x_max = int(np.abs(x_t).max(initial=0))
    bound = b_max * int(row_mass.max(initial=0)) + x_max
    if bound < _FLOAT_EXACT_LIMIT:
        prod = coeffs.astype(np.float64) @ basis.T.astype(np.float64)
        return (prod + x_t.astype(np.float64)).astype(np.int64)
    out = np.empty((coeffs.shape[0], basis.shape[0]), dtype=np.int64)
    basis_obj = basis.astype(object)
    for j, y in enumerate(coeffs):
        row = basis_obj @ y.astype(object) + x_t.astype(object)
        if any(abs(v) >= 2**63 for v in row):
            raise IntegerOverflowError(f"sample {j}: move exceeds 64-bit range")
        out[j] = row.astype(np.int64)
    return out


def sample_loop(x_t: np.ndarray, samples: int, basis: np.ndarray,
                params: GammaParams, fiber: FiberStore,
                rng: np.random.Generator, log: bool = False) -> tuple[GammaParams, IterationStats]:
    """One batch: freeze rates, draw ``samples`` proposals, accept new fiber points.

    The rates are computed once from ``params`` and held fixed for the whole
    batch; a proposal changes the parameters only when it is nonnegative and
    not yet stored.  Duplicates still count toward ``samples_in_fiber``.
    """
    k = basis.shape[1]
    if k == 0:
        stats = IterationStats(samples_in_fiber=samples, new_points=0)
        return params, stats
    rates = params.rates()
    y_plus, y_minus, y = sample_coefficient_batch(rates, samples, rng)
    proposals = batch_moves(basis, y, x_t)
    feasible = (proposals >= 0).all(axis=1)
    in_fiber = 0
    accepted: list[int] = []
    for j in range(samples):
        if not feasible[j]:
            continue
        in_fiber += 1
        if fiber.add(proposals[j]):
            accepted.append(j)
    if accepted:
        idx = np.array(accepted)
        new_params = GammaParams(
            params.alpha_plus + y_plus[idx].sum(axis=0),
            params.alpha_minus + y_minus[idx].sum(axis=0),
            params.beta_plus + len(accepted),
            params.beta_minus + len(accepted),
        )
    else:
        new_params = params
    stats = IterationStats(samples_in_fiber=in_fiber, new_points=len(accepted))
    if log:
        stats.accepted_plus = y_plus[accepted].copy()
        stats.accepted_minus = y_minus[accepted].copy()
        stats.rates_plus = rates.lambda_plus
        stats.rates_minus = rates.lambda_minus
    return new_params, stats


def update_loop(x_t: np.ndarray, iterations: int, samples: int, basis: np.ndarray,
                params0: GammaParams, fiber: FiberStore,
                rng: np.random.Generator, log: bool = False) -> list[IterationStats]:
    """Run ``iterations`` sequential batches, threading parameters through."""
    params = params0
    stats = []
    for _ in range(iterations):
        params, st = sample_loop(x_t, samples, basis, params, fiber, rng, log=log)
        stats.append(st)
    return stats


def select_next(fiber: FiberStore, step_new: list[int], pi_policy,
                rng: np.random.Generator) -> np.ndarray:
    """Pick the next starting element.

    Indicator policy: uniform over the step's new elements when any exist,
    else uniform over everything discovered.  Fixed policy: Bernoulli(pi)
    mix of the two pools, falling back to the full pool when no new
    elements exist.
    """
    if not fiber.elements:
        raise ValueError("fiber store is empty")
    use_new = bool(step_new)
    if use_new and pi_policy != "indicator":
        use_new = rng.random() < float(pi_policy)
    if use_new:
        return fiber.elements[step_new[int(rng.integers(len(step_new)))]]
    return fiber.elements[int(rng.integers(len(fiber.elements)))]


def rumba(config: RunConfig, a: IntMatrix, u: np.ndarray, x0: np.ndarray,
          basis: LatticeBasis | None = None, log: bool = False,
          rng: np.random.Generator | None = None):
    """Full adaptive run; returns (FiberStore, RunMetrics, iteration logs).

    Parameters reset to their initial values at the start of every step;
    within a step they thread across iterations.  Deterministic given the
    seed in ``config`` (unless an explicit ``rng`` is passed).
    """
    u = np.asarray(u, dtype=np.int64)
    x0 = np.asarray(x0, dtype=np.int64)
    if np.any(x0 < 0):
        raise InfeasibleStartError("x0 has negative entries")
    if not np.array_equal(mat_vec(a, x0), u):
        raise InfeasibleStartError("A x0 != u")
    if basis is None:
        basis = kernel_lattice_basis(a)
    elif np.any(mat_mul(a, basis.basis_matrix).data):
        raise ValueError("supplied basis has a column outside ker_Z(A)")
    b = basis.basis_matrix.data
    k = b.shape[1]
    if rng is None:
        rng = np.random.Generator(np.random.PCG64(config.seed))

    fiber = FiberStore(a.cols)
    fiber.add(x0)
    metrics = RunMetrics()
    logs: list[list[IterationStats]] = []
    x_t = x0
    for t in range(1, config.steps + 1):
        fiber.begin_step()
        params0 = config.initial_params(k)
        step_start = time.perf_counter()
        step_new_so_far = 0
        iter_stats = []
        params = params0
        for i in range(1, config.iterations + 1):
            it_start = time.perf_counter()
            params, st = sample_loop(x_t, config.samples, b, params, fiber, rng, log=log)
            elapsed = (time.perf_counter() - it_start) * 1000.0
            step_new_so_far += st.new_points
            metrics.rows.append(IterationRecord(
                step=t, iteration=i, samples_in_fiber=st.samples_in_fiber,
                new_points=st.new_points, cumulative_unique=len(fiber),
                step_new_so_far=step_new_so_far, elapsed_ms=elapsed))
            iter_stats.append(st)
        metrics.steps.append(StepRecord(
            step=t, new_points=step_new_so_far, cumulative_unique=len(fiber),
            elapsed_ms=(time.perf_counter() - step_start) * 1000.0))
        if log:
            logs.append(iter_stats)
        x_t = select_next(fiber, fiber.new_in_current_step(), config.pi_policy, rng)
    return fiber, metrics, logs
