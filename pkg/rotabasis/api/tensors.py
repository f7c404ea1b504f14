"""Commands for scalars, permutations, tensors and exact linear algebra."""

from rotabasis.api.io import Outcome, index_list, load_document
from rotabasis.exceptions import InputValidationError
from rotabasis.models.scalars import format_scalar, perm_sign
from rotabasis.models.schemas import MatrixDocument, MatrixListDocument, TensorDocument
from rotabasis.services.linear_algebra import determinant, matrix_rank
from rotabasis.services.tensor_algebra import (
    levi_civita_symbol,
    levi_civita_tensor,
    multilinear_product,
    tensor_power,
    tensor_product,
)

COMMANDS = {
    "sign": "perm_sign",
    "symbol": "levi_civita_symbol",
    "lc": "levi_civita_tensor",
    "act": "multilinear_product",
    "product": "tensor_product",
    "power": "tensor_power",
    "det": "determinant",
    "rank": "matrix_rank",
}


def sign(args) -> Outcome:
    return Outcome(perm_sign(args.perm))


def symbol(args) -> Outcome:
    return Outcome(format_scalar(levi_civita_symbol(args.t)))


def levi_civita(args) -> Outcome:
    return Outcome(TensorDocument.from_domain(levi_civita_tensor(args.n)))


def act(args) -> Outcome:
    mats = load_document(args.mats, MatrixListDocument).to_domain()
    x = load_document(args.tensor, TensorDocument).to_domain()
    return Outcome(TensorDocument.from_domain(multilinear_product(mats, x)))


def product(args) -> Outcome:
    x = load_document(args.left, TensorDocument).to_domain()
    y = load_document(args.right, TensorDocument).to_domain()
    return Outcome(TensorDocument.from_domain(tensor_product(x, y)))


def power(args) -> Outcome:
    x = load_document(args.tensor, TensorDocument).to_domain()
    return Outcome(TensorDocument.from_domain(tensor_power(x, args.k)))


def det(args) -> Outcome:
    m = load_document(args.matrix, MatrixDocument).to_domain()
    return Outcome(format_scalar(determinant(m)))


def rank(args) -> Outcome:
    rows = load_document(args.matrix, MatrixDocument).rows()
    if any(not row for row in rows):
        raise InputValidationError("Matrix has empty columns")
    return Outcome(matrix_rank(rows))


def register(subparsers) -> None:
    p = subparsers.add_parser("sign", help="sign of a permutation in one-line notation")
    p.add_argument("--perm", type=index_list, required=True)
    p.set_defaults(handler=sign)

    p = subparsers.add_parser("symbol", help="Levi-Civita symbol of a tuple")
    p.add_argument("--t", type=index_list, required=True)
    p.set_defaults(handler=symbol)

    p = subparsers.add_parser("lc", help="emit the Levi-Civita tensor E_n")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=levi_civita)

    p = subparsers.add_parser("act", help="multilinear product (A_1, ..., A_d) . X")
    p.add_argument("--mats", required=True)
    p.add_argument("--tensor", required=True)
    p.set_defaults(handler=act)

    p = subparsers.add_parser("product", help="tensor product of two tensors of equal order")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(handler=product)

    p = subparsers.add_parser("power", help="k-th tensor power")
    p.add_argument("--tensor", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(handler=power)

    p = subparsers.add_parser("det", help="exact determinant")
    p.add_argument("--matrix", required=True)
    p.set_defaults(handler=det)

    p = subparsers.add_parser("rank", help="exact rank of a (possibly rectangular) matrix")
    p.add_argument("--matrix", required=True)
    p.set_defaults(handler=rank)
