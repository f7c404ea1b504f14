from fractions import Fraction
from typing import Sequence, Tuple

from loguru import logger

from rotabasis.exceptions import InputValidationError
from rotabasis.models.tensors import DenseTensor, SquareMatrix
from rotabasis.services.linear_algebra import determinant, matrix_from_columns
from rotabasis.services.tensor_algebra import levi_civita_tensor, multilinear_product


class BasisSequence:
    """n invertible n x n matrices; the columns of B_i are the i-th basis."""

    def __init__(self, bases: Sequence[SquareMatrix]):
        bases = tuple(bases)
        n = len(bases)
        if n == 0:
            raise InputValidationError("A basis sequence needs at least one basis")
        if any(b.dim != n for b in bases):
            raise InputValidationError(f"Expected {n} matrices of dimension {n}")
        dets = tuple(determinant(b) for b in bases)
        for i, det in enumerate(dets, start=1):
            if det == 0:
                raise InputValidationError(f"B_{i} is singular, its columns are not a basis")
        self.bases = bases
        self.dets: Tuple[Fraction, ...] = dets
        self.n = n

    def __getitem__(self, i: int) -> SquareMatrix:
        """B_i, 1-based."""
        return self.bases[i - 1]

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.bases)

    def column_determinant(self, index: Sequence[int]) -> Fraction:
        """det(B_1[i_1], ..., B_n[i_n])."""
        return determinant(matrix_from_columns([self.bases[k][i] for k, i in enumerate(index)]))


class DeterminantalTensor(DenseTensor):
    """D(i_1, ..., i_n) = det(B_1[i_1], ..., B_n[i_n]), remembering its bases."""

    def __init__(self, entries, bases: BasisSequence):
        super().__init__(entries, dim=bases.n)
        self.bases = bases


def determinantal_tensor(bases: BasisSequence) -> DeterminantalTensor:
    n = bases.n
    values = DenseTensor.from_function(n, n, bases.column_determinant)
    logger.debug("determinantal tensor: n={} support={}", n, len(values.support()))
    return DeterminantalTensor(values.array, bases)


def _invertible_family(mats: Sequence[SquareMatrix], name: str) -> int:
    n = len(mats)
    if n == 0 or any(m.dim != n for m in mats):
        raise InputValidationError(f"{name} must hold n matrices of dimension n")
    if any(determinant(m) == 0 for m in mats):
        raise InputValidationError(f"{name} contains a singular matrix")
    return n


def check_change_of_basis_rule(a_list: Sequence[SquareMatrix], b_list: Sequence[SquareMatrix]) -> bool:
    """D(A_1 B_1, ..., A_n B_n) == (B_1^T, ..., B_n^T) . D(A_1, ..., A_n)."""
    n = _invertible_family(a_list, "A")
    if _invertible_family(b_list, "B") != n:
        raise InputValidationError("A and B must have the same length")
    left = determinantal_tensor(BasisSequence([a @ b for a, b in zip(a_list, b_list)]))
    right = multilinear_product([b.transpose() for b in b_list], determinantal_tensor(BasisSequence(a_list)))
    return left == right


def check_transpose_action(bases: BasisSequence) -> bool:
    """D(B_1, ..., B_n) == (B_1^T, ..., B_n^T) . E_n."""
    transposed = [b.transpose() for b in bases]
    return determinantal_tensor(bases) == multilinear_product(transposed, levi_civita_tensor(bases.n))

