"""Built-in benchmark instances: independence tables, no-three-way tables,
and the segmented-fiber family, plus the sparse-table generator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .intlinalg import IntMatrix, LatticeBasis, kernel_lattice_basis, mat_mul, mat_vec


@dataclass(frozen=True)
class ModelInstance:
    """A problem instance: constraints, right-hand side, one feasible point."""

    a: IntMatrix
    rhs: np.ndarray
    x0: np.ndarray
    structured_basis: LatticeBasis | None = None
    label: str = ""

    def __post_init__(self):
        rhs = np.asarray(self.rhs, dtype=np.int64)
        x0 = np.asarray(self.x0, dtype=np.int64)
        if np.any(x0 < 0):
            raise ValueError(f"{self.label}: x0 has negative entries")
        if not np.array_equal(mat_vec(self.a, x0), rhs):
            raise ValueError(f"{self.label}: A x0 != u")
        if self.structured_basis is not None:
            if np.any(mat_mul(self.a, self.structured_basis.basis_matrix).data):
                raise ValueError(f"{self.label}: structured basis not in kernel")
        rhs.setflags(write=False)
        x0.setflags(write=False)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "x0", x0)


# 4x4 hair (columns) by eye (rows) counts; the classic contingency table whose
# row/column sums form the built-in independence benchmark.
DS98_TABLE = np.array([
    [68, 119, 26, 7],
    [20, 84, 17, 94],
    [15, 54, 14, 10],
    [5, 29, 14, 16],
], dtype=np.int64)


def independence_model(rows: int, cols: int, table) -> ModelInstance:
    """Row/column-sum constraints for a two-way table.

    x0 is the row-major flattening; A stacks the row-sum rows on top of the
    column-sum rows, so u = (row sums, column sums).
    """
    table = np.asarray(table, dtype=np.int64)
    if table.shape != (rows, cols):
        raise ValueError(f"table has shape {table.shape}, expected ({rows}, {cols})")
    if np.any(table < 0):
        raise ValueError("table entries must be nonnegative")
    a = np.zeros((rows + cols, rows * cols), dtype=np.int64)
    for i in range(rows):
        a[i, i * cols:(i + 1) * cols] = 1
    for j in range(cols):
        a[rows + j, j::cols] = 1
    x0 = table.ravel()
    mat = IntMatrix(a)
    return ModelInstance(mat, mat_vec(mat, x0), x0,
                         label=f"independence_{rows}x{cols}")


def ds98_instance() -> ModelInstance:
    """The built-in 4x4 independence benchmark.

    The reference runs flatten the table column-major, so the instance is
    built from the transposed table with the two constraint blocks swapped
    back; this reproduces x0 = (68, 20, ..., 10, 16) together with
    u = (220, 215, 93, 64, 108, 286, 71, 127).
    """
    base = independence_model(4, 4, DS98_TABLE.T)
    a = np.vstack([base.a.data[4:], base.a.data[:4]])
    u = np.concatenate([base.rhs[4:], base.rhs[:4]])
    return ModelInstance(IntMatrix(a), u, base.x0, label="ds98")


def two_factor_matrix(q: int) -> IntMatrix:
    """Row/column-sum configuration matrix for a QxQ table (2Q x Q^2)."""
    return independence_model(q, q, np.zeros((q, q), dtype=np.int64)).a


def no3way_model(q: int, table) -> ModelInstance:
    """No-three-factor-interaction model on a QxQxQ table.

    Cell (a, b, c) flattens to position a*Q^2 + b*Q + c.  The constraint
    matrix stacks Q diagonal copies of the two-factor matrix over a row of
    Q identity blocks; the structured lattice basis places a two-factor
    kernel basis in slice a and its negation in the last slice.
    """
    table = np.asarray(table, dtype=np.int64)
    if table.shape != (q, q, q):
        raise ValueError(f"table has shape {table.shape}, expected ({q}, {q}, {q})")
    if np.any(table < 0):
        raise ValueError("table entries must be nonnegative")
    a_star = two_factor_matrix(q).data
    q2 = q * q
    a = np.zeros((3 * q2, q ** 3), dtype=np.int64)
    for s in range(q):
        a[2 * q * s:2 * q * (s + 1), q2 * s:q2 * (s + 1)] = a_star
    for s in range(q):
        a[2 * q2:3 * q2, q2 * s:q2 * (s + 1)] = np.eye(q2, dtype=np.int64)

    b_star = kernel_lattice_basis(IntMatrix(a_star)).basis_matrix.data
    k_star = b_star.shape[1]
    b = np.zeros((q ** 3, (q - 1) * k_star), dtype=np.int64)
    for s in range(q - 1):
        b[q2 * s:q2 * (s + 1), k_star * s:k_star * (s + 1)] = b_star
        b[q2 * (q - 1):, k_star * s:k_star * (s + 1)] = -b_star
    basis = LatticeBasis(IntMatrix(b), source="user-supplied") if b.shape[1] else None

    x0 = table.ravel()
    mat = IntMatrix(a)
    return ModelInstance(mat, mat_vec(mat, x0), x0, structured_basis=basis,
                         label=f"no3way_q{q}")


def sparse_table(q: int, sparsity: float, seed: int) -> np.ndarray:
    """Random QxQxQ table: round(S*Q^3) support cells, 5*Q^3 total count.

    The support is drawn without replacement; counts come from drawing
    5*Q^3 cells from the support with replacement.
    """
    if not (0.0 < sparsity <= 1.0):
        raise ValueError("sparsity must lie in (0, 1]")
    rng = np.random.Generator(np.random.PCG64(seed))
    n_cells = q ** 3
    support_size = int(round(sparsity * n_cells))
    support = rng.choice(n_cells, size=support_size, replace=False)
    draws = rng.choice(support, size=5 * n_cells, replace=True)
    table = np.bincount(draws, minlength=n_cells).astype(np.int64)
    return table.reshape(q, q, q)


def ak_matrix(k: int) -> IntMatrix:
    """The (2k+1) x (4k+2) segmented-fiber constraint matrix."""
    if k < 1:
        raise ValueError("k must be >= 1")
    eye = np.eye(k, dtype=np.int64)
    a = np.zeros((2 * k + 1, 4 * k + 2), dtype=np.int64)
    a[:k, :k] = eye
    a[:k, k:2 * k] = eye
    a[:k, 4 * k] = -1
    a[k:2 * k, 2 * k:3 * k] = eye
    a[k:2 * k, 3 * k:4 * k] = eye
    a[k:2 * k, 4 * k + 1] = -1
    a[2 * k, 4 * k] = 1
    a[2 * k, 4 * k + 1] = 1
    return IntMatrix(a)


def ak_start(k: int, alternate: bool = False) -> np.ndarray:
    """Feasible starting points: the two endpoints of the bottleneck move."""
    x = np.zeros(4 * k + 2, dtype=np.int64)
    if alternate:
        x[3 * k:4 * k] = 1
        x[4 * k + 1] = 1
    else:
        x[k:2 * k] = 1
        x[4 * k] = 1
    return x


def ak_bottleneck_move(k: int) -> np.ndarray:
    """The single move joining the two fiber segments."""
    b = np.zeros(4 * k + 2, dtype=np.int64)
    b[k:2 * k] = -1
    b[3 * k:4 * k] = 1
    b[4 * k] = -1
    b[4 * k + 1] = 1
    return b


def ak_structured_basis(k: int) -> LatticeBasis:
    """Natural lattice basis of ker(A_k): per-pair swap moves in each
    segment plus the bottleneck move joining the segments (2k+1 columns)."""
    n = 4 * k + 2
    cols = []
    for i in range(k):
        v = np.zeros(n, dtype=np.int64)
        v[i], v[k + i] = 1, -1
        cols.append(v)
    for i in range(k):
        v = np.zeros(n, dtype=np.int64)
        v[2 * k + i], v[3 * k + i] = 1, -1
        cols.append(v)
    cols.append(ak_bottleneck_move(k))
    return LatticeBasis(IntMatrix(np.column_stack(cols)), source="user-supplied")


def ak_model(k: int, alternate_start: bool = False) -> ModelInstance:
    """Segmented-fiber instance with u = e_{2k+1}.

    Carries the natural structured basis: without the bottleneck move as an
    explicit basis element, segment crossings need dense coefficient
    vectors and are rarely sampled.
    """
    a = ak_matrix(k)
    u = np.zeros(2 * k + 1, dtype=np.int64)
    u[2 * k] = 1
    x0 = ak_start(k, alternate=alternate_start)
    return ModelInstance(a, u, x0, structured_basis=ak_structured_basis(k),
                         label=f"ak_{k}" + ("_alt" if alternate_start else ""))


def ak_fiber_size(k: int) -> int:
    """Exact fiber cardinality 2^(k+1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k + 1 >= 63:
        raise OverflowError("fiber size exceeds 64-bit range")
    return 2 ** (k + 1)
