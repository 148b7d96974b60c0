import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spreadlab.errors import (
    DimensionError,
    MatrixFormatError,
    NilpotentMatrixError,
    NumericOverflowError,
)
from spreadlab.matrix import (
    DenseMatrix,
    ExactMatrix,
    NonnegativeMatrix,
    exact_eq,
    exact_mul,
    exact_sub,
    format_matrix,
    is_irreducible,
    is_nilpotent,
    normalize_to_unit_radius,
    parse_matrix,
    read_matrix,
    trace_power,
    zero_diagonal_count,
)
from spreadlab.spectral import perron_root


def reachability_oracle(A) -> bool:
    """(I + P)^(n-1) > 0 entrywise, by repeated boolean products."""
    P = np.asarray(A) != 0
    n = P.shape[0]
    R = np.eye(n, dtype=bool) | P
    for _ in range(n):
        R = (R.astype(int) @ (np.eye(n, dtype=bool) | P).astype(int)) > 0
    return bool(R.all())


def hamiltonian_cycle(A):
    """Brute force: a directed cycle through every vertex, or None."""
    n = len(A)
    for perm in itertools.permutations(range(1, n)):
        cyc = (0, *perm, 0)
        if all(A[i][j] > 0 for i, j in zip(cyc, cyc[1:])):
            return cyc
    return None


nonneg = arrays(
    np.float64,
    st.tuples(st.integers(1, 7)).map(lambda t: (t[0], t[0])),
    elements=st.sampled_from([0.0, 0.0, 0.5, 1.0, 2.0, 3.25]),
)


class TestTypes:
    def test_dense_rejects_non_finite(self):
        with pytest.raises(MatrixFormatError):
            DenseMatrix([[0.0, np.inf], [1.0, 0.0]])

    def test_dense_rejects_non_square(self):
        with pytest.raises(DimensionError):
            DenseMatrix([[1.0, 2.0]])

    def test_dense_is_read_only(self):
        M = DenseMatrix([[1.0, 2.0], [3.0, 4.0]])
        with pytest.raises(ValueError):
            M.data[0, 0] = 5.0

    def test_nonnegative_rejects_negative(self):
        with pytest.raises(MatrixFormatError):
            NonnegativeMatrix([[0.0, -1.0], [1.0, 0.0]])

    def test_cn_flag_is_validated(self):
        with pytest.raises(MatrixFormatError):
            NonnegativeMatrix([[1.0, 0.0], [0.0, 1.0]], in_cn=True)
        with pytest.raises(MatrixFormatError):
            NonnegativeMatrix([[0.0, 4.0], [1.0, 0.0]], in_cn=True)
        NonnegativeMatrix([[0.0, 2.0], [0.5, 0.0]], in_cn=True)

    def test_from_fractions_keeps_exact_form(self):
        M = DenseMatrix.from_fractions([[Fraction(1, 4), 0], [Fraction(2, 3), 1]])
        assert M.denominator == 12
        assert M.exact == ExactMatrix(((3, 0), (8, 12)))
        assert M.fraction(1, 0) == Fraction(2, 3)


class TestZeroDiagonal:
    def test_diag01(self, diag01):
        assert zero_diagonal_count(diag01) == 1

    def test_witness(self, witness3):
        assert zero_diagonal_count(witness3) == 1

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_zero_matrix(self, n):
        assert zero_diagonal_count(NonnegativeMatrix(np.zeros((n, n)))) == n

    def test_no_tolerance(self):
        assert zero_diagonal_count(NonnegativeMatrix([[1e-300, 1.0], [1.0, 0.0]])) == 1

    @given(nonneg)
    def test_bounded_by_n(self, A):
        k = zero_diagonal_count(NonnegativeMatrix(A))
        assert 0 <= k <= A.shape[0]


class TestTracePower:
    def test_witness_trace(self, witness3):
        assert trace_power(witness3, 1) == 1.5

    @pytest.mark.parametrize("m", [1, 2, 7])
    def test_identity(self, m):
        assert trace_power(DenseMatrix(np.eye(4)), m) == 4.0

    def test_hand_product(self):
        # [[0,4],[1,0]]^2 = 4I
        assert trace_power(DenseMatrix([[0.0, 4.0], [1.0, 0.0]]), 2) == 8.0

    def test_overflow(self):
        with pytest.raises(NumericOverflowError, match="numeric overflow"):
            trace_power(DenseMatrix([[1e200, 0.0], [0.0, 1.0]]), 3)

    def test_m_positive(self):
        with pytest.raises(DimensionError):
            trace_power(DenseMatrix(np.eye(2)), 0)

    @given(arrays(np.float64, (4, 4), elements=st.floats(-3, 3)))
    def test_first_trace_is_diagonal_sum(self, A):
        assert trace_power(DenseMatrix(A), 1) == math.fsum(A[i, i] for i in range(4))


class TestIrreducible:
    def test_two_cycle(self):
        assert is_irreducible(NonnegativeMatrix([[0, 1], [1, 0]]))

    def test_diag01(self, diag01):
        assert not is_irreducible(diag01)

    def test_ref_A5(self, ref_A5):
        assert hamiltonian_cycle(ref_A5) is not None
        assert is_irreducible(NonnegativeMatrix(ref_A5))

    def test_one_by_one(self):
        assert is_irreducible(NonnegativeMatrix([[0.0]]))
        assert is_irreducible(NonnegativeMatrix([[3.0]]))

    @given(nonneg)
    def test_matches_reachability_oracle(self, A):
        if A.shape[0] == 1:
            return
        assert is_irreducible(NonnegativeMatrix(A)) == reachability_oracle(A)

    @given(nonneg, st.randoms(use_true_random=False))
    def test_permutation_invariant(self, A, rnd):
        n = A.shape[0]
        perm = list(range(n))
        rnd.shuffle(perm)
        P = np.eye(n)[perm]
        assert is_irreducible(NonnegativeMatrix(A)) == is_irreducible(NonnegativeMatrix(P.T @ A @ P))


class TestNilpotent:
    def test_strictly_upper(self):
        assert is_nilpotent(NonnegativeMatrix(np.triu(np.ones((4, 4)), 1)))

    def test_cycle_is_not(self):
        assert not is_nilpotent(NonnegativeMatrix([[0, 1], [1, 0]]))

    @given(nonneg)
    def test_matches_matrix_power(self, A):
        n = A.shape[0]
        P = (A != 0).astype(float)
        powered = np.linalg.matrix_power(P, n)
        assert is_nilpotent(NonnegativeMatrix(A)) == (not powered.any())


class TestNormalize:
    def test_swap4(self):
        out = normalize_to_unit_radius(NonnegativeMatrix([[0.0, 4.0], [1.0, 0.0]]))
        np.testing.assert_allclose(out.data, [[0.0, 2.0], [0.5, 0.0]], atol=1e-12)
        assert out.in_cn

    def test_already_unit(self, witness3):
        out = normalize_to_unit_radius(witness3)
        np.testing.assert_array_equal(out.data, witness3.data)
        assert out.exact == witness3.exact

    def test_nilpotent(self):
        with pytest.raises(NilpotentMatrixError, match="nilpotent matrix cannot be normalized"):
            normalize_to_unit_radius(NonnegativeMatrix(np.triu(np.ones((3, 3)), 1)))

    def test_flag_needs_zero_corner(self):
        out = normalize_to_unit_radius(NonnegativeMatrix([[1.0, 2.0], [3.0, 1.0]]))
        assert not out.in_cn

    @given(nonneg)
    def test_projection(self, A):
        M = NonnegativeMatrix(A)
        if is_nilpotent(M):
            return
        once = normalize_to_unit_radius(M)
        assert abs(perron_root(once) - 1.0) <= 1e-9
        twice = normalize_to_unit_radius(once)
        assert np.max(np.abs(twice.data - once.data)) <= 1e-9


class TestExact:
    def test_identity_is_neutral(self):
        X = ExactMatrix(((1, -2, 3), (4, 5, 6), (7, 8, 10**30)))
        assert exact_eq(exact_mul(X, ExactMatrix.identity(3)), X)

    def test_self_difference(self):
        X = ExactMatrix(((1, 2), (3, 4)))
        assert exact_sub(X, X) == ExactMatrix.zeros(2)

    def test_subdiagonal_square(self):
        N = ExactMatrix(((0, 0, 0), (1, 0, 0), (0, 1, 0)))
        assert exact_mul(N, N) == ExactMatrix(((0, 0, 0), (0, 0, 0), (1, 0, 0)))

    def test_mismatch(self):
        with pytest.raises(DimensionError):
            exact_mul(ExactMatrix.identity(2), ExactMatrix.identity(3))

    def test_no_overflow(self):
        X = ExactMatrix(((2**62, 0), (0, 1)))
        assert (X @ X)[0, 0] == 2**124

    def test_rejects_floats(self):
        with pytest.raises(MatrixFormatError):
            ExactMatrix(((1.5, 0), (0, 1)))


class TestTextFormat:
    def test_roundtrip_integer(self, ref_A5):
        text = format_matrix(ExactMatrix(tuple(map(tuple, ref_A5))))
        assert text == "5\n0 4 0 0 0\n0 5 3 0 0\n2 0 5 2 0\n0 2 0 5 1\n2 0 2 0 5\n"
        assert parse_matrix(text).exact.rows == tuple(map(tuple, ref_A5))

    def test_decimal_entries_parse_exactly(self, fixtures_dir):
        M = read_matrix(fixtures_dir / "witness3.txt")
        assert M.denominator == 4
        assert M.exact == ExactMatrix(((0, 2, 0), (0, 3, 1), (2, 0, 3)))

    def test_float_roundtrip(self, rng):
        A = rng.random((4, 4))
        back = parse_matrix(format_matrix(DenseMatrix(A)))
        np.testing.assert_array_equal(back.data, A)

    @pytest.mark.parametrize(
        "text",
        ["", "2\n1 2\n", "2\n1 2\n3\n", "x\n1\n", "2\n1 a\n3 4\n", "1 2\n1\n", "0\n"],
    )
    def test_malformed(self, text):
        with pytest.raises(MatrixFormatError):
            parse_matrix(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(MatrixFormatError):
            read_matrix(tmp_path / "nope.txt")
