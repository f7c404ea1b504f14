"""
Exact linear algebra over Q.

Both determinant and rank clear denominators row by row (an integer lift)
and then run fraction-free Bareiss elimination, so every intermediate value
is an integer minor of the lifted matrix.
"""

from fractions import Fraction
from math import lcm
from typing import List, Sequence, Tuple, Union

from rotabasis.exceptions import InputValidationError
from rotabasis.models.tensors import SquareMatrix

MatrixLike = Union[SquareMatrix, Sequence[Sequence[object]]]


def _rows_of(m: MatrixLike) -> List[List[Fraction]]:
    if isinstance(m, SquareMatrix):
        return m.rows()
    rows = [[Fraction(v) for v in row] for row in m]
    if rows and len({len(r) for r in rows}) != 1:
        raise InputValidationError("Matrix rows have different lengths")
    return rows


def integer_lift(rows: List[List[Fraction]]) -> Tuple[List[List[int]], int]:
    """Scale each row to integers; returns (integer rows, product of the row scales)."""
    lifted, scale = [], 1
    for row in rows:
        s = lcm(*(v.denominator for v in row)) if row else 1
        lifted.append([int(v * s) for v in row])
        scale *= s
    return lifted, scale


def determinant(m: MatrixLike) -> Fraction:
    rows = _rows_of(m)
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise InputValidationError("determinant needs a square matrix")

    a, scale = integer_lift(rows)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if pivot is None:
                return Fraction(0)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return Fraction(sign * a[n - 1][n - 1], scale)


def matrix_rank(m: MatrixLike) -> int:
    """Rank over Q of a (possibly rectangular) matrix given by rows."""
    rows = _rows_of(m)
    if not rows or not rows[0]:
        return 0

    a, _ = integer_lift(rows)
    n_rows, n_cols = len(a), len(a[0])
    rank, prev = 0, 1
    for c in range(n_cols):
        if rank == n_rows:
            break
        pivot = next((r for r in range(rank, n_rows) if a[r][c] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][c]
        for i in range(rank + 1, n_rows):
            aic = a[i][c]
            row_i, row_r = a[i], a[rank]
            for j in range(c + 1, n_cols):
                row_i[j] = (row_i[j] * p - aic * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        rank += 1
    return rank


def matrix_from_columns(columns: Sequence[Sequence[object]]) -> List[List[Fraction]]:
    """Rows of the matrix whose columns are the given vectors."""
    return [[Fraction(col[i]) for col in columns] for i in range(len(columns[0]))]


class IndependenceTracker:
    """
    Incremental Gaussian elimination: vectors are pushed one at a time and
    rejected as soon as they fall into the span of the ones already held.
    Supports LIFO pops for backtracking.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._reduced: List[Tuple[int, List[Fraction]]] = []  # (pivot column, reduced vector)

    def __len__(self) -> int:
        return len(self._reduced)

    def push(self, vector: Sequence[Fraction]) -> bool:
        v = [Fraction(x) for x in vector]
        for pivot, basis in self._reduced:
            if v[pivot] != 0:
                f = v[pivot] / basis[pivot]
                v = [x - f * y for x, y in zip(v, basis)]
        pivot = next((i for i, x in enumerate(v) if x != 0), None)
        if pivot is None:
            return False
        self._reduced.append((pivot, v))
        return True

    def pop(self) -> None:
        self._reduced.pop()


def column_row_factorization(rows: Sequence[Sequence[object]]) -> Tuple[List[List[Fraction]], List[List[Fraction]]]:
    """
    X = C R with R the nonzero rows of the reduced row echelon form of X and
    C the pivot columns of X. Returns (columns of C, rows of R); both have
    rank(X) entries.
    """
    a = [[Fraction(v) for v in row] for row in rows]
    n_rows, n_cols = len(a), len(a[0]) if a else 0
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][c]
        a[r] = [v / p for v in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    original = [[Fraction(v) for v in row] for row in rows]
    columns = [[original[i][c] for i in range(n_rows)] for c in pivots]
    return columns, a[:r]
