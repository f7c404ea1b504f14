"""
Levi-Civita tensors, the GL^d action and tensor products.
"""

from fractions import Fraction
from functools import reduce
from itertools import permutations
from typing import List, Sequence

import numpy as np
from loguru import logger

from rotabasis.exceptions import InputValidationError
from rotabasis.models.scalars import count_inversions
from rotabasis.models.tensors import DenseTensor, Index, SparseTensor, SquareMatrix, Tensor


def levi_civita_symbol(t: Sequence[int]) -> Fraction:
    """sgn(t) if t is a permutation of [n] (n = len(t)), 0 on a repeated entry."""
    n = len(t)
    if any(isinstance(x, bool) or not isinstance(x, int) or not 1 <= x <= n for x in t):
        raise InputValidationError(f"Levi-Civita symbol entries must lie in [1, {n}]: {tuple(t)}")
    if len(set(t)) != n:
        return Fraction(0)
    return Fraction(-1 if count_inversions(t) % 2 else 1)


def levi_civita_tensor(n: int) -> SparseTensor:
    """E_n as a sparse order-n, dim-n tensor; its support is S_n (n! points)."""
    if n < 1:
        raise InputValidationError("levi_civita_tensor needs n >= 1")
    entries = {p: levi_civita_symbol(p) for p in permutations(range(1, n + 1))}
    return SparseTensor(n, n, entries)


def multilinear_product(mats: Sequence[SquareMatrix], x: Tensor) -> DenseTensor:
    """
    (A_1, ..., A_d) . X, computed as d successive single-mode contractions:
    mode k is contracted with A_k along its second index, which is the
    defining sum Y(i) = sum_j A_1(i_1, j_1) ... A_d(i_d, j_d) X(j).
    """
    if len(mats) != x.order:
        raise InputValidationError(f"Expected {x.order} matrices, got {len(mats)}")
    if any(a.dim != x.dim for a in mats):
        raise InputValidationError(f"All matrices must have dimension {x.dim}")

    y = x.to_dense().array
    for axis, a in enumerate(mats):
        y = np.moveaxis(np.tensordot(a.array, y, axes=([1], [axis])), 0, axis)
    return DenseTensor(y, dim=x.dim)


def unit_tensor(order: int) -> SparseTensor:
    """The order-d, dim-1 tensor with entry 1: the unit for tensor_product."""
    return SparseTensor(order, 1, {(1,) * order: 1})


def tensor_product(x: Tensor, y: Tensor) -> Tensor:
    """
    X (x) Y in T^d(nm), pairing (i, j) -> k = (i - 1) m + j on every coordinate,
    i.e. pairs ordered lexicographically. Sparse inputs give a sparse result.
    """
    if x.order != y.order:
        raise InputValidationError(f"Tensor orders differ: {x.order} vs {y.order}")
    m = y.dim
    if isinstance(x, SparseTensor) and isinstance(y, SparseTensor):
        entries = {}
        for i, xv in x.support():
            for j, yv in y.support():
                k = tuple((a - 1) * m + b for a, b in zip(i, j))
                entries[k] = xv * yv
        return SparseTensor(x.order, x.dim * m, entries)
    # np.kron on equal-rank arrays uses exactly this lexicographic pairing
    return DenseTensor(np.kron(x.to_dense().array, y.to_dense().array), dim=x.dim * m)


def tensor_power(x: Tensor, k: int) -> Tensor:
    """X^{(x)k}, left-associated."""
    if k < 1:
        raise InputValidationError("tensor_power needs k >= 1")
    logger.debug("tensor power: order={} dim={} k={}", x.order, x.dim, k)
    return reduce(tensor_product, [x] * k)


def flatten_power_index(digits: Sequence[int], n: int) -> int:
    """Position of (i_1, ..., i_k) in [n]^k under the lexicographic pairing, 1-based."""
    k = 0
    for d in digits:
        k = k * n + (d - 1)
    return k + 1


def power_index_digits(k: int, n: int, power: int) -> Index:
    """Inverse of flatten_power_index."""
    digits: List[int] = []
    k -= 1
    for _ in range(power):
        k, r = divmod(k, n)
        digits.append(r + 1)
    return tuple(reversed(digits))


def as_matrix_rows(x: Tensor) -> List[List[Fraction]]:
    """An order-2 tensor read as a matrix, X(i, j) in row i, column j."""
    if x.order != 2:
        raise InputValidationError("Only order-2 tensors flatten to a matrix")
    return [list(r) for r in x.to_dense().array]
