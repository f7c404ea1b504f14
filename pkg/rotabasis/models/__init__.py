from rotabasis.models.scalars import Permutation, Scalar, format_scalar, parse_scalar, perm_sign
from rotabasis.models.tensors import DenseTensor, SparseTensor, SquareMatrix, Tensor

__all__ = [
    "Permutation",
    "Scalar",
    "format_scalar",
    "parse_scalar",
    "perm_sign",
    "DenseTensor",
    "SparseTensor",
    "SquareMatrix",
    "Tensor",
]
