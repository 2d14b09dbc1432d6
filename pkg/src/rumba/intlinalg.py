"""Exact integer linear algebra: rank, Hermite normal form, lattice kernel bases.

All computations are carried out in exact (arbitrary precision) integer
arithmetic internally; results are stored as 64-bit integers and any value
that does not fit is reported as an overflow error rather than wrapped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

I64_MIN = -(2**63)
I64_MAX = 2**63 - 1


class IntegerOverflowError(OverflowError):
    """An exact integer result fell outside the signed 64-bit range."""


class DimensionError(ValueError):
    """Operand shapes do not conform."""


def _check_i64(value: int, context: str) -> int:
    if not (I64_MIN <= value <= I64_MAX):
        raise IntegerOverflowError(f"{context}: value {value} exceeds 64-bit range")
    return value


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix with 64-bit entries, row-major."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise DimensionError(f"IntMatrix requires a 2-D array, got shape {arr.shape}")
        if arr.dtype != np.int64:
            # Conversion from object/python ints raises on out-of-range values.
            try:
                arr = arr.astype(np.int64, casting="unsafe")
            except OverflowError as exc:
                raise IntegerOverflowError(f"matrix entry exceeds 64-bit range: {exc}") from exc
            if not np.array_equal(arr, np.asarray(self.data, dtype=object)):
                raise IntegerOverflowError("matrix entries exceed 64-bit range")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def tolists(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.data]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and np.array_equal(self.data, other.data)


@dataclass(frozen=True)
class LatticeBasis:
    """Columns spanning ker_Z(A) as a lattice.

    ``source`` records whether the basis came out of the HNF kernel
    computation or was supplied by the user.
    """

    basis_matrix: IntMatrix
    source: str = field(default="computed-kernel")

    def __post_init__(self):
        if self.source not in ("computed-kernel", "user-supplied"):
            raise ValueError(f"unknown basis source {self.source!r}")
        cols = self.basis_matrix.data
        if cols.shape[1] and not np.all(np.any(cols != 0, axis=0)):
            raise ValueError("lattice basis contains a zero column")

    @property
    def num_moves(self) -> int:
        return self.basis_matrix.cols

    def validate_against(self, a: IntMatrix) -> None:
        """Check A·b = 0 for every column b; raises ValueError otherwise."""
        prod = mat_mul(a, self.basis_matrix)
        if np.any(prod.data):
            raise ValueError("basis column is not in the kernel of A")
        if self.source == "computed-kernel":
            expected = a.cols - rank(a)
            if self.num_moves != expected:
                raise ValueError(
                    f"computed-kernel basis has {self.num_moves} columns, expected {expected}"
                )


def _exact_matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n, m = len(a), len(a[0]) if a else 0
    if len(b) != m:
        raise DimensionError(f"matmul: {n}x{m} times {len(b)}x?")
    p = len(b[0]) if b else 0
    bt = list(zip(*b)) if b else []
    return [[sum(ar[k] * bc[k] for k in range(m)) for bc in bt] for ar in a]


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Exact overflow-checked product A·B.

    Fast path: when a conservative bound shows every partial sum stays
    below 2^53, the float64 BLAS product is exact; otherwise the product
    is formed in arbitrary-precision integers and range-checked.
    """
    if a.cols != b.rows:
        raise DimensionError(f"mat_mul: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    bound = np.abs(a.data).astype(np.float64) @ np.abs(b.data).astype(np.float64)
    if bound.size == 0 or bound.max() < 2.0**53:
        prod = a.data.astype(np.float64) @ b.data.astype(np.float64)
        return IntMatrix(prod.astype(np.int64))
    exact = _exact_matmul(a.tolists(), b.tolists())
    for i, row in enumerate(exact):
        for v in row:
            _check_i64(v, f"mat_mul row {i}")
    return IntMatrix(np.array(exact, dtype=np.int64))


def mat_vec(a: IntMatrix, x) -> np.ndarray:
    """Exact overflow-checked product A·x as an int64 vector."""
    xv = [int(v) for v in np.asarray(x).ravel()]
    if len(xv) != a.cols:
        raise DimensionError(f"mat_vec: matrix has {a.cols} columns, vector has {len(xv)}")
    out = []
    for i, row in enumerate(a.tolists()):
        s = sum(row[j] * xv[j] for j in range(a.cols))
        out.append(_check_i64(s, f"mat_vec row {i}"))
    return np.array(out, dtype=np.int64)


def rank(a: IntMatrix) -> int:
    """Rank of A over the rationals by fraction-free (Bareiss) elimination."""
    m = [row[:] for row in a.tolists()]
    n_rows, n_cols = a.rows, a.cols
    if n_rows == 0 or n_cols == 0:
        raise DimensionError("rank of empty matrix")
    r = 0
    prev = 1
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, n_rows):
            for j in range(c + 1, n_cols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == n_rows:
            break
    return r


def determinant(a: IntMatrix) -> int:
    """Exact determinant of a square matrix (Bareiss)."""
    if a.rows != a.cols:
        raise DimensionError("determinant of non-square matrix")
    n = a.rows
    m = [row[:] for row in a.tolists()]
    sign = 1
    prev = 1
    for c in range(n - 1):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return 0
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[c][c] * m[i][j] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


def hermite_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column-style HNF: returns (H, U) with H = A·U and U unimodular.

    Pivot selection takes the smallest nonzero absolute value, leftmost on
    ties, so the result is deterministic across platforms.  Columns of U
    aligned with zero columns of H span ker_Z(A).
    """
    n_rows, n_cols = a.rows, a.cols
    if n_rows == 0 or n_cols == 0:
        raise DimensionError("HNF of empty matrix")
    # Work column-wise in exact python ints; h[j] / u[j] are column j.
    at = a.tolists()
    h = [[at[i][j] for i in range(n_rows)] for j in range(n_cols)]
    u = [[1 if i == j else 0 for i in range(n_cols)] for j in range(n_cols)]

    pc = 0  # next pivot column slot
    for r in range(n_rows):
        while True:
            live = [j for j in range(pc, n_cols) if h[j][r] != 0]
            if not live:
                break
            j_star = min(live, key=lambda j: (abs(h[j][r]), j))
            if j_star != pc:
                h[pc], h[j_star] = h[j_star], h[pc]
                u[pc], u[j_star] = u[j_star], u[pc]
            if h[pc][r] < 0:
                h[pc] = [-v for v in h[pc]]
                u[pc] = [-v for v in u[pc]]
            p = h[pc][r]
            done = True
            for j in range(pc + 1, n_cols):
                if h[j][r] != 0:
                    q = h[j][r] // p
                    h[j] = [hj - q * hp for hj, hp in zip(h[j], h[pc])]
                    u[j] = [uj - q * up for uj, up in zip(u[j], u[pc])]
                    if h[j][r] != 0:
                        done = False
            if done:
                break
        if pc < n_cols and h[pc][r] != 0:
            # Canonical form: reduce earlier pivot columns modulo the pivot.
            p = h[pc][r]
            for j in range(pc):
                q = h[j][r] // p
                if q:
                    h[j] = [hj - q * hp for hj, hp in zip(h[j], h[pc])]
                    u[j] = [uj - q * up for uj, up in zip(u[j], u[pc])]
            pc += 1
        _check_columns_i64(h, f"HNF elimination at pivot row {r}")
        _check_columns_i64(u, f"HNF transform at pivot row {r}")

    h_mat = IntMatrix(np.array(h, dtype=np.int64).T)
    u_mat = IntMatrix(np.array(u, dtype=np.int64).T)
    return h_mat, u_mat


def _check_columns_i64(cols: list[list[int]], context: str) -> None:
    for col in cols:
        for v in col:
            if not (I64_MIN <= v <= I64_MAX):
                raise IntegerOverflowError(f"{context}: entry {v} exceeds 64-bit range")


def kernel_lattice_basis(a: IntMatrix, size_reduce: bool = False) -> LatticeBasis:
    """Lattice basis of ker_Z(A) with K = cols(A) - rank(A) columns.

    The HNF route guarantees the columns generate the kernel as a lattice,
    not merely as a vector space.  ``size_reduce`` optionally shrinks
    columns by subtracting integer multiples of earlier columns; off by
    default because it changes downstream sampler behavior.
    """
    h, u = hermite_normal_form(a)
    zero_cols = [j for j in range(h.cols) if not np.any(h.data[:, j])]
    cols = [list(u.data[:, j].astype(object)) for j in zero_cols]
    if size_reduce and cols:
        cols = _size_reduce(cols)
    basis = np.array(cols, dtype=np.int64).T if cols else np.zeros((a.cols, 0), dtype=np.int64)
    lb = LatticeBasis(IntMatrix(basis), source="computed-kernel")
    lb.validate_against(a)
    return lb


def _size_reduce(cols: list[list[int]]) -> list[list[int]]:
    out = [col[:] for col in cols]
    for i in range(1, len(out)):
        for j in range(i):
            denom = sum(v * v for v in out[j])
            if denom == 0:
                continue
            num = sum(a * b for a, b in zip(out[i], out[j]))
            q = (2 * num + denom) // (2 * denom)  # nearest integer to num/denom
            if q:
                out[i] = [a - q * b for a, b in zip(out[i], out[j])]
    return out
