"""
Tensors T : [n]^d -> Q in dense and sparse form, and square matrices.

Dense tensors wrap a read-only numpy object array of Fractions (row-major,
axis k of the array is coordinate k+1 of the index). Sparse tensors keep a
map from 1-based index tuples to nonzero Fractions. Both forms compare equal
whenever they describe the same function.
"""

from abc import ABC, abstractmethod
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from rotabasis.exceptions import InputValidationError

Index = Tuple[int, ...]

_to_fraction = np.frompyfunc(Fraction, 1, 1)


def _frozen_fraction_array(values) -> np.ndarray:
    arr = np.asarray(_to_fraction(np.asarray(values, dtype=object)), dtype=object)
    arr.flags.writeable = False
    return arr


class Tensor(ABC):
    """Common surface of DenseTensor and SparseTensor."""

    order: int
    dim: int

    @abstractmethod
    def entry(self, index: Sequence[int]) -> Fraction:
        ...

    @abstractmethod
    def support(self) -> List[Tuple[Index, Fraction]]:
        """Nonzero entries as (index, value) pairs, sorted by index."""

    @abstractmethod
    def to_dense(self) -> "DenseTensor":
        ...

    @abstractmethod
    def to_sparse(self) -> "SparseTensor":
        ...

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.dim,) * self.order

    def support_indices(self) -> List[Index]:
        return [idx for idx, _ in self.support()]

    def is_zero(self) -> bool:
        return not self.support()

    def check_index(self, index: Sequence[int]) -> Index:
        index = tuple(index)
        if len(index) != self.order:
            raise InputValidationError(f"Index {index} has length {len(index)}, expected {self.order}")
        if any(not 1 <= i <= self.dim for i in index):
            raise InputValidationError(f"Index {index} out of range [1, {self.dim}]")
        return index

    def __getitem__(self, index: Sequence[int]) -> Fraction:
        return self.entry(index)

    def same_shape(self, other: "Tensor") -> bool:
        return self.order == other.order and self.dim == other.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.same_shape(other) and dict(self.support()) == dict(other.support())

    __hash__ = None

    def __add__(self, other: "Tensor") -> "Tensor":
        if not self.same_shape(other):
            raise InputValidationError("Cannot add tensors of different shapes")
        if isinstance(self, SparseTensor) and isinstance(other, SparseTensor):
            merged: Dict[Index, Fraction] = dict(self.support())
            for idx, v in other.support():
                merged[idx] = merged.get(idx, Fraction(0)) + v
            return SparseTensor(self.order, self.dim, merged)
        return DenseTensor(self.to_dense().array + other.to_dense().array, dim=self.dim)

    def __neg__(self) -> "Tensor":
        return self.scale(-1)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-other)

    @abstractmethod
    def scale(self, c) -> "Tensor":
        ...

    def __repr__(self) -> str:
        entries = ", ".join(f"{idx}: {v}" for idx, v in self.support()[:8])
        more = "" if len(self.support()) <= 8 else ", ..."
        return f"{type(self).__name__}(order={self.order}, dim={self.dim}, {{{entries}{more}}})"


class DenseTensor(Tensor):
    """
    Dense tensor over a read-only numpy object array.

    Order 0 is allowed only so that slice-rank residuals of order-1 tensors
    have a home; `dim` must then be passed explicitly.
    """

    def __init__(self, entries, dim: Optional[int] = None):
        arr = _frozen_fraction_array(entries)
        if arr.ndim == 0:
            if dim is None:
                raise InputValidationError("Order-0 tensors need an explicit dim")
        else:
            if len(set(arr.shape)) != 1:
                raise InputValidationError(f"All modes must share one dimension, got shape {arr.shape}")
            if dim is not None and dim != arr.shape[0]:
                raise InputValidationError(f"dim={dim} disagrees with shape {arr.shape}")
            dim = arr.shape[0]
        if dim < 1:
            raise InputValidationError("Tensor dimension must be at least 1")
        self.array = arr
        self.order = arr.ndim
        self.dim = dim

    @classmethod
    def zeros(cls, order: int, dim: int) -> "DenseTensor":
        arr = np.empty((dim,) * order, dtype=object)
        arr.fill(Fraction(0))
        return cls(arr, dim=dim)

    @classmethod
    def from_function(cls, order: int, dim: int, fn: Callable[[Index], object]) -> "DenseTensor":
        arr = np.empty((dim,) * order, dtype=object)
        for idx in product(range(1, dim + 1), repeat=order):
            arr[tuple(i - 1 for i in idx)] = fn(idx)
        return cls(arr, dim=dim)

    def entry(self, index: Sequence[int]) -> Fraction:
        index = self.check_index(index)
        return self.array[tuple(i - 1 for i in index)]

    def support(self) -> List[Tuple[Index, Fraction]]:
        # np.ndindex walks in row-major order, i.e. sorted by index
        out = []
        for pos in np.ndindex(*self.array.shape):
            v = self.array[pos]
            if v != 0:
                out.append((tuple(p + 1 for p in pos), v))
        return out

    def slice(self, axis: int, value: int) -> "DenseTensor":
        """The (d-1)-tensor obtained by fixing coordinate `axis` (1-based) to `value`."""
        if not 1 <= axis <= self.order:
            raise InputValidationError(f"Axis {axis} out of range [1, {self.order}]")
        return DenseTensor(np.take(self.array, value - 1, axis=axis - 1), dim=self.dim)

    def to_dense(self) -> "DenseTensor":
        return self

    def to_sparse(self) -> "SparseTensor":
        return SparseTensor(self.order, self.dim, dict(self.support()))

    def scale(self, c) -> "DenseTensor":
        return DenseTensor(self.array * Fraction(c), dim=self.dim)


class SparseTensor(Tensor):
    """Sparse tensor; zero values passed in are dropped."""

    def __init__(self, order: int, dim: int, entries: Mapping[Sequence[int], object]):
        if order < 1 or dim < 1:
            raise InputValidationError(f"Sparse tensors need order >= 1 and dim >= 1, got {order}, {dim}")
        self.order = order
        self.dim = dim
        support: Dict[Index, Fraction] = {}
        for idx, v in entries.items():
            idx = self.check_index(idx)
            v = Fraction(v)
            if v != 0:
                support[idx] = v
        self._support = support
        self._sorted = sorted(support.items())

    @classmethod
    def from_items(cls, order: int, dim: int, items: Iterable[Tuple[Sequence[int], object]]) -> "SparseTensor":
        entries: Dict[Index, Fraction] = {}
        for idx, v in items:
            idx = tuple(idx)
            if idx in entries:
                raise InputValidationError(f"Duplicate index {idx}")
            entries[idx] = v
        return cls(order, dim, entries)

    def entry(self, index: Sequence[int]) -> Fraction:
        index = self.check_index(index)
        return self._support.get(index, Fraction(0))

    def support(self) -> List[Tuple[Index, Fraction]]:
        return list(self._sorted)

    def __len__(self) -> int:
        return len(self._support)

    def to_dense(self) -> DenseTensor:
        arr = np.empty(self.shape, dtype=object)
        arr.fill(Fraction(0))
        for idx, v in self._sorted:
            arr[tuple(i - 1 for i in idx)] = v
        return DenseTensor(arr, dim=self.dim)

    def to_sparse(self) -> "SparseTensor":
        return self

    def scale(self, c) -> "SparseTensor":
        c = Fraction(c)
        return SparseTensor(self.order, self.dim, {idx: v * c for idx, v in self._sorted})


class SquareMatrix:
    """n x n rational matrix; A(i, j) is row i, column j, and A[i] the i-th column vector."""

    def __init__(self, entries):
        arr = _frozen_fraction_array(entries)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise InputValidationError(f"Expected a nonempty square matrix, got shape {arr.shape}")
        self.array = arr
        self.dim = arr.shape[0]

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]]) -> "SquareMatrix":
        n = len(columns)
        if n == 0 or any(len(c) != n for c in columns):
            raise InputValidationError("Column lists must form a nonempty square matrix")
        return cls([[columns[j][i] for j in range(n)] for i in range(n)])

    @classmethod
    def identity(cls, n: int) -> "SquareMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, *values) -> "SquareMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __call__(self, i: int, j: int) -> Fraction:
        return self.array[i - 1, j - 1]

    def __getitem__(self, i: int) -> Tuple[Fraction, ...]:
        """The i-th column vector (1-based)."""
        if not 1 <= i <= self.dim:
            raise InputValidationError(f"Column {i} out of range [1, {self.dim}]")
        return tuple(self.array[:, i - 1])

    def columns(self) -> List[Tuple[Fraction, ...]]:
        return [self[i] for i in range(1, self.dim + 1)]

    def rows(self) -> List[List[Fraction]]:
        return [list(r) for r in self.array]

    def transpose(self) -> "SquareMatrix":
        return SquareMatrix(self.array.T)

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        if self.dim != other.dim:
            raise InputValidationError("Matrix dimensions differ")
        return SquareMatrix(self.array.dot(other.array))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.dim == other.dim and self.rows() == other.rows()

    __hash__ = None

    def __repr__(self) -> str:
        return f"SquareMatrix({[[str(v) for v in r] for r in self.rows()]})"
