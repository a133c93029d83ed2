from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diagpr.errors import IndexOutOfRange, InvalidInput, NormalizationUnavailable
from diagpr.linalg import (RationalMatrix, Transform, apply_transform, as_fraction, column_span_dim,
                           det, kernel_basis, matrix, rank, rref, solve)
from oracles import leibniz_det, minor_rank

FERMAT = [[1, -2, 1, 0], [1, -1, 0, 1]]

small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-2, 2), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rref_proportional_rows():
    R, T = rref(matrix([[2, 4], [1, 2]]))
    assert R == matrix([[1, 2], [0, 0]])
    assert rank(R) == 1


def test_rref_identity_is_fixed():
    I = RationalMatrix.identity(3)
    R, T = rref(I)
    assert R == I
    assert T.row_ops == ()


def test_fermat_rank():
    assert rank(matrix(FERMAT)) == 2 == minor_rank(FERMAT)


def test_rank_of_zero_and_empty():
    assert rank(RationalMatrix.zeros(2, 3)) == 0
    assert rank(RationalMatrix.zeros(0, 4)) == 0


def test_kernel_single_row():
    assert kernel_basis(matrix([[1, -1]])) == ((1, 1),)


def test_kernel_normalized():
    M = matrix([[1, 1, -2]])
    basis = kernel_basis(M, normalize=True)
    assert basis[0] == (1, 1, 1)
    assert len(basis) == 2
    for v in basis:
        assert not any(M.mul_vector(v))
    assert all(v[0] == 0 for v in basis[1:])


def test_kernel_normalization_needs_zero_column_sum():
    with pytest.raises(NormalizationUnavailable):
        kernel_basis(matrix([[1, 2]]), normalize=True)


def test_kernel_of_identity_is_empty():
    assert kernel_basis(RationalMatrix.identity(2)) == ()


def test_column_span_dim():
    F = matrix(FERMAT)
    assert column_span_dim(F, []) == 0
    assert column_span_dim(F, [1, 2]) == 2
    assert column_span_dim(matrix([[1, 0, 1, 0], [0, 1, 0, 1]]), [1, 3]) == 1
    with pytest.raises(IndexOutOfRange):
        column_span_dim(F, [4])


def test_parsing_and_json_round_trip():
    M = matrix([[Fraction(1, 2), "3/4"], [["-5", "6"], 7]])
    assert M[0, 1] == Fraction(3, 4) and M[1, 0] == Fraction(-5, 6)
    assert RationalMatrix.from_json(M.to_json()) == M
    with pytest.raises(InvalidInput):
        as_fraction(0.5)
    with pytest.raises(InvalidInput):
        RationalMatrix.from_json({"rows": 2, "cols": 2, "entries": ["1"]})


def test_transform_json_round_trip():
    _, T = rref(matrix([[0, 2, 1], [3, 1, 1]]))
    assert Transform.from_json(T.to_json()) == T


def test_solve():
    F = matrix(FERMAT)
    x = solve(F, [0, 1])
    assert F.mul_vector(x) == (0, 1)
    assert solve(matrix([[1, 1], [2, 2]]), [1, 3]) is None


@settings(max_examples=200, deadline=None)
@given(small_matrices)
def test_rank_matches_minor_oracle(rows):
    M = matrix(rows)
    assert rank(M) == minor_rank(rows) == rank(M.transpose())


@settings(max_examples=200, deadline=None)
@given(small_matrices)
def test_rref_transcript_replays(rows):
    M = matrix(rows)
    R, T = rref(M)
    assert apply_transform(M, T) == R


@settings(max_examples=200, deadline=None)
@given(small_matrices)
def test_kernel_is_exact_null_space(rows):
    M = matrix(rows)
    basis = kernel_basis(M)
    assert len(basis) == M.cols - rank(M)
    for v in basis:
        assert not any(M.mul_vector(v))
    if basis:
        assert rank(matrix(list(basis))) == len(basis)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                                                      min_size=n, max_size=n)))
def test_det_matches_leibniz(rows):
    assert det(matrix(rows)) == leibniz_det([[Fraction(x) for x in r] for r in rows])
