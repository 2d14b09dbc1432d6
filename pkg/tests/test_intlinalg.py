"""Exact integer linear algebra: rank, HNF, kernel bases, overflow checks."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import rumba
from rumba.intlinalg import (
    DimensionError,
    IntegerOverflowError,
    IntMatrix,
    LatticeBasis,
    determinant,
    hermite_normal_form,
    kernel_lattice_basis,
    mat_mul,
    mat_vec,
    rank,
)
from conftest import int_matrix


def reference_rank(a: np.ndarray) -> int:
    """Independent rank oracle: fraction-free elimination over python ints,
    written separately from the library implementation."""
    m = [[int(v) for v in row] for row in a]
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            if m[i][c]:
                f1, f2 = m[r][c], m[i][c]
                m[i] = [f1 * m[i][j] - f2 * m[r][j] for j in range(cols)]
        r += 1
    return r


class TestRank:
    def test_identity(self):
        assert rank(int_matrix(np.eye(2))) == 2

    def test_row_vector(self):
        assert rank(int_matrix([[1, 1]])) == 1

    def test_a2_family_matrix(self):
        a2 = rumba.models.ak_matrix(2)
        assert a2.data.shape == (5, 10)
        assert rank(a2) == 5
        assert reference_rank(a2.data) == 5

    def test_matches_reference_on_benchmarks(self, ds98):
        for a in (ds98.a, rumba.models.ak_matrix(3), rumba.models.two_factor_matrix(4)):
            assert rank(a) == reference_rank(a.data)

    def test_ds98_rank(self, ds98):
        assert rank(ds98.a) == 7

    def test_rank_deficient(self):
        assert rank(int_matrix([[1, 2], [2, 4], [3, 6]])) == 1


class TestHermiteNormalForm:
    def test_row_1_1(self):
        h, u = hermite_normal_form(int_matrix([[1, 1]]))
        assert h.data.tolist() == [[1, 0]]
        kernel_col = u.data[:, 1]
        assert sorted(kernel_col.tolist()) in ([-1, 1],)

    def test_identity_no_kernel(self):
        h, u = hermite_normal_form(int_matrix(np.eye(2)))
        assert h.data.tolist() == [[1, 0], [0, 1]]
        assert not [j for j in range(2) if not h.data[:, j].any()]

    def test_row_2_4(self):
        h, u = hermite_normal_form(int_matrix([[2, 4]]))
        assert h.data.tolist() == [[2, 0]]
        v = u.data[:, 1]
        assert tuple(v.tolist()) in ((2, -1), (-2, 1))

    @pytest.mark.parametrize("maker", [
        lambda: rumba.ds98_instance().a,
        lambda: rumba.models.ak_matrix(2),
        lambda: rumba.models.ak_matrix(5),
        lambda: rumba.models.two_factor_matrix(3),
        lambda: int_matrix([[2, 4, 6], [3, 5, 7]]),
    ])
    def test_round_trip_unimodular(self, maker):
        a = maker()
        h, u = hermite_normal_form(a)
        assert mat_mul(a, u) == h
        assert abs(determinant(u)) == 1

    def test_pivot_echelon_shape(self):
        a = int_matrix([[0, 2, 1], [4, 0, 0]])
        h, u = hermite_normal_form(a)
        assert mat_mul(a, u) == h
        # Pivot columns come first; trailing columns of H are zero.
        r = rank(a)
        assert not h.data[:, r:].any()


class TestKernelLatticeBasis:
    def test_ds98_kernel(self, ds98):
        b = kernel_lattice_basis(ds98.a)
        assert b.num_moves == 16 - 7 == 9
        assert not mat_mul(ds98.a, b.basis_matrix).data.any()

    def test_square_invertible_empty(self):
        b = kernel_lattice_basis(int_matrix([[2, 1], [1, 1]]))
        assert b.num_moves == 0

    def test_a10_kernel(self):
        a = rumba.models.ak_matrix(10)
        b = kernel_lattice_basis(a)
        assert b.num_moves == 42 - rank(a)
        assert not mat_mul(a, b.basis_matrix).data.any()

    def test_source_recorded(self, indep3):
        assert kernel_lattice_basis(indep3.a).source == "computed-kernel"

    def test_no_zero_columns(self):
        with pytest.raises(ValueError):
            LatticeBasis(int_matrix([[0, 1], [0, -1]]), source="user-supplied")

    def test_validate_against_rejects_non_kernel(self, indep3):
        bad = LatticeBasis(int_matrix(np.ones((9, 1))), source="user-supplied")
        with pytest.raises(ValueError):
            bad.validate_against(indep3.a)

    def test_size_reduce_still_kernel(self, ds98):
        b = kernel_lattice_basis(ds98.a, size_reduce=True)
        assert b.num_moves == 9
        assert not mat_mul(ds98.a, b.basis_matrix).data.any()


class TestMatVec:
    def test_identity(self):
        x = np.array([3, -1, 4], dtype=np.int64)
        assert mat_vec(int_matrix(np.eye(3)), x).tolist() == x.tolist()

    def test_ds98_margins(self, ds98):
        u = mat_vec(ds98.a, ds98.x0)
        assert u.tolist() == [220, 215, 93, 64, 108, 286, 71, 127]

    def test_kernel_columns_annihilated(self, ds98):
        b = kernel_lattice_basis(ds98.a)
        for j in range(b.num_moves):
            assert not mat_vec(ds98.a, b.basis_matrix.data[:, j]).any()

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            mat_vec(int_matrix(np.eye(3)), np.array([1, 2]))

    def test_overflow_reported(self):
        a = int_matrix([[2**62, 2**62]])
        with pytest.raises(IntegerOverflowError):
            mat_vec(a, np.array([1, 1], dtype=np.int64))


class TestOverflowChecking:
    def test_entry_overflow_on_construction(self):
        with pytest.raises(IntegerOverflowError):
            IntMatrix(np.array([[2**63]], dtype=object))

    def test_mat_mul_overflow(self):
        a = int_matrix([[2**62, 2**62]])
        b = int_matrix([[1], [1]])
        with pytest.raises(IntegerOverflowError):
            mat_mul(a, b)

    def test_in_range_entries_preserved(self):
        a = IntMatrix(np.array([[2**63 - 1, -(2**63)]], dtype=np.int64))
        assert a.data[0, 0] == 2**63 - 1


def _in_integer_span(basis: np.ndarray, v: np.ndarray) -> bool:
    """Does v lie in the integer column span of basis?  The basis generates
    the kernel as a lattice, so the unique rational solution must be integral."""
    if basis.shape[1] == 0:
        return not v.any()
    y, *_ = np.linalg.lstsq(basis.astype(float), v.astype(float), rcond=None)
    yr = np.rint(y).astype(np.int64)
    return np.array_equal(basis @ yr, v)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_kernel_basis_generates_lattice(seed):
    """Every small integer kernel vector of a random small A lies in the
    integer span of the computed basis."""
    g = np.random.Generator(np.random.PCG64(seed))
    n = int(g.integers(1, 7))
    m = int(g.integers(1, 9))
    a = g.integers(-3, 4, size=(n, m)).astype(np.int64)
    mat = IntMatrix(a)
    basis = kernel_lattice_basis(mat).basis_matrix.data
    # Exhaustive sweep of {-1, 0, 1}^m (and a random slice of [-2, 2]^m).
    grids = np.stack(np.meshgrid(*([np.arange(-1, 2)] * m), indexing="ij"), -1).reshape(-1, m)
    extra = g.integers(-2, 3, size=(200, m))
    for v in np.vstack([grids, extra]).astype(np.int64):
        if not (a @ v).any():
            assert _in_integer_span(basis, v)


def test_kernel_count_random_matrices():
    g = np.random.Generator(np.random.PCG64(7))
    for _ in range(25):
        n = int(g.integers(1, 6))
        m = int(g.integers(1, 8))
        mat = IntMatrix(g.integers(-3, 4, size=(n, m)).astype(np.int64))
        b = kernel_lattice_basis(mat)
        assert b.num_moves == m - rank(mat)
        if b.num_moves:
            assert not mat_mul(mat, b.basis_matrix).data.any()
