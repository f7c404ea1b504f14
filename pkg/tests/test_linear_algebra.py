from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given

from rotabasis.exceptions import InputValidationError
from rotabasis.models.scalars import perm_sign
from rotabasis.models.tensors import SquareMatrix
from rotabasis.services.linear_algebra import (
    IndependenceTracker,
    column_row_factorization,
    determinant,
    matrix_rank,
)
from rotabasis.services.tensor_algebra import as_matrix_rows, levi_civita_tensor
from tests.strategies import matrices, row_lists, small_integers


def leibniz_determinant(rows):
    n = len(rows)
    total = Fraction(0)
    for p in permutations(range(n)):
        term = Fraction(perm_sign([i + 1 for i in p]))
        for i in range(n):
            term *= rows[i][p[i]]
        total += term
    return total


def test_determinant_examples():
    assert determinant(SquareMatrix.identity(3)) == 1
    assert determinant(SquareMatrix.diag(2, 3)) == 6
    assert determinant(SquareMatrix([["1/2", 0], [0, "2/3"]])) == Fraction(1, 3)
    assert determinant(SquareMatrix([[0, 1], [1, 0]])) == -1
    assert determinant(SquareMatrix([[1, 2], [2, 4]])) == 0


@given(matrices(4, small_integers))
def test_determinant_matches_cofactor_oracle_on_integer_matrices(m):
    assert determinant(m) == leibniz_determinant(m.rows())


@given(matrices(3))
def test_determinant_matches_cofactor_oracle_on_rationals(m):
    assert determinant(m) == leibniz_determinant(m.rows())


@given(matrices(3), matrices(3))
def test_determinant_is_multiplicative(a, b):
    assert determinant(a @ b) == determinant(a) * determinant(b)


def test_determinant_rejects_rectangular_input():
    with pytest.raises(InputValidationError):
        determinant([[1, 2, 3], [4, 5, 6]])


def test_matrix_rank_examples():
    assert matrix_rank(SquareMatrix.identity(4)) == 4
    assert matrix_rank([[0, 0], [0, 0]]) == 0
    assert matrix_rank(as_matrix_rows(levi_civita_tensor(2))) == 2
    assert matrix_rank([[1, 2, 3], [2, 4, 6]]) == 1
    assert matrix_rank([[1, 0], [0, 1], [1, 1]]) == 2
    assert matrix_rank([]) == 0


@given(row_lists(3, 4))
def test_rank_is_invariant_under_transpose(rows):
    transposed = [list(col) for col in zip(*rows)]
    assert matrix_rank(rows) == matrix_rank(transposed)


@given(row_lists(3, 4))
def test_column_row_factorization_reproduces_the_matrix(rows):
    columns, row_basis = column_row_factorization(rows)
    assert len(columns) == len(row_basis) == matrix_rank(rows)
    for i in range(3):
        for j in range(4):
            assert sum((columns[t][i] * row_basis[t][j] for t in range(len(columns))), Fraction(0)) == rows[i][j]


def test_independence_tracker_backtracks():
    tracker = IndependenceTracker(3)
    assert tracker.push([1, 0, 0])
    assert tracker.push([1, 1, 0])
    assert not tracker.push([2, 1, 0])
    assert len(tracker) == 2
    tracker.pop()
    assert tracker.push([2, 1, 0])
    assert tracker.push([0, 0, "1/3"])
    assert len(tracker) == 3


@given(matrices(3))
def test_tracker_accepts_all_columns_iff_nonsingular(m):
    tracker = IndependenceTracker(3)
    accepted = all(tracker.push(col) for col in m.columns())
    assert accepted == (determinant(m) != 0)
