"""
JSON documents read and written by the command line.

Rationals travel as strings ("p/q" or a decimal integer); JSON integers are
accepted on input. Every document converts to and from the domain types.
"""

from fractions import Fraction
from typing import List, Optional, Union

from pydantic import BaseModel, field_validator

from rotabasis.exceptions import InputValidationError
from rotabasis.models.scalars import Permutation, format_scalar, parse_scalar
from rotabasis.models.tensors import DenseTensor, SparseTensor, SquareMatrix, Tensor

RationalIn = Union[int, str]


def _rational(value) -> str:
    # normalise on the way in so documents compare by value
    return format_scalar(parse_scalar(value))


def _rational_list(values, what: str) -> List[str]:
    # raw JSON: check the shape before iterating
    if not isinstance(values, list):
        raise ValueError(f"{what} must be a list of rationals")
    return [_rational(v) for v in values]


class TensorEntry(BaseModel):
    i: List[int]
    v: str

    @field_validator("v", mode="before")
    @classmethod
    def normalise_value(cls, v: RationalIn) -> str:
        return _rational(v)


class TensorDocument(BaseModel):
    order: int
    dim: int
    entries: List[TensorEntry]

    def to_domain(self) -> SparseTensor:
        return SparseTensor.from_items(self.order, self.dim, ((e.i, Fraction(e.v)) for e in self.entries))

    @classmethod
    def from_domain(cls, x: Tensor) -> "TensorDocument":
        return cls(
            order=x.order,
            dim=x.dim,
            entries=[TensorEntry(i=list(idx), v=format_scalar(v)) for idx, v in x.support()],
        )


class MatrixDocument(BaseModel):
    """Column-major: cols[i] is the (i+1)-th column vector."""

    dim: Optional[int] = None
    cols: List[List[str]]

    @field_validator("cols", mode="before")
    @classmethod
    def normalise_cols(cls, cols):
        if not isinstance(cols, list):
            raise ValueError("cols must be a list of column vectors")
        return [_rational_list(col, "every column") for col in cols]

    def column_vectors(self) -> List[List[Fraction]]:
        return [[Fraction(v) for v in col] for col in self.cols]

    def rows(self) -> List[List[Fraction]]:
        """Row view of a possibly rectangular matrix."""
        cols = self.column_vectors()
        if not cols:
            return []
        if len({len(c) for c in cols}) != 1:
            raise InputValidationError("Matrix columns have different lengths")
        return [[col[i] for col in cols] for i in range(len(cols[0]))]

    def to_domain(self) -> SquareMatrix:
        m = SquareMatrix.from_columns(self.column_vectors())
        if self.dim is not None and self.dim != m.dim:
            raise InputValidationError(f"Matrix declares dim={self.dim} but has {m.dim} columns")
        return m

    @classmethod
    def from_domain(cls, m: SquareMatrix) -> "MatrixDocument":
        return cls(dim=m.dim, cols=[[format_scalar(v) for v in col] for col in m.columns()])


class MatrixListDocument(BaseModel):
    """The d matrices of a multilinear action."""

    mats: List[MatrixDocument]

    def to_domain(self) -> List[SquareMatrix]:
        return [m.to_domain() for m in self.mats]


class OrdersDocument(BaseModel):
    orders: List[List[int]]


class PermsDocument(BaseModel):
    perms: List[List[int]]

    def to_domain(self) -> List[Permutation]:
        return [Permutation(tuple(p)) for p in self.perms]


class CertificateDocument(BaseModel):
    M: int
    perms: List[List[int]]
    value: str

    @field_validator("value", mode="before")
    @classmethod
    def normalise_value(cls, v: RationalIn) -> str:
        return _rational(v)


class BasesDocument(BaseModel):
    n: int
    bases: List[MatrixDocument]

    def to_domain(self) -> List[SquareMatrix]:
        if len(self.bases) != self.n:
            raise InputValidationError(f"Expected exactly {self.n} bases, got {len(self.bases)}")
        return [b.to_domain() for b in self.bases]

    @classmethod
    def from_domain(cls, bases) -> "BasesDocument":
        mats = list(bases)
        return cls(n=len(mats), bases=[MatrixDocument.from_domain(b) for b in mats])


class ArrangementDocument(BaseModel):
    n: int
    M: int
    grid: List[List[int]]

    def shape_problems(self) -> List[str]:
        problems = []
        if len(self.grid) != self.n:
            problems.append(f"grid has {len(self.grid)} rows, expected n={self.n}")
        if any(len(row) != self.M for row in self.grid):
            problems.append(f"grid rows must have M={self.M} entries")
        return problems


class SliceTermDocument(BaseModel):
    axis: int
    vector: List[str]
    residual: TensorDocument

    @field_validator("vector", mode="before")
    @classmethod
    def normalise_vector(cls, vector):
        return _rational_list(vector, "vector")


class DecompositionDocument(BaseModel):
    terms: List[SliceTermDocument]


class LabelledIndex(BaseModel):
    i: List[int]
    label: int


class PartitionDocument(BaseModel):
    value: int
    partition: List[LabelledIndex]


class DiagonalCertificateDocument(BaseModel):
    bound: int
    points: List[List[int]]


def dense_residual(doc: TensorDocument) -> DenseTensor:
    """Residuals of order-1 terms are order 0: a single entry at the empty index."""
    if doc.order == 0:
        value = Fraction(doc.entries[0].v) if doc.entries else Fraction(0)
        return DenseTensor(value, dim=doc.dim)
    return doc.to_domain().to_dense()


def residual_document(residual: DenseTensor) -> TensorDocument:
    if residual.order == 0:
        value = residual.array[()]
        entries = [TensorEntry(i=[], v=format_scalar(value))] if value != 0 else []
        return TensorDocument(order=0, dim=residual.dim, entries=entries)
    return TensorDocument.from_domain(residual)
