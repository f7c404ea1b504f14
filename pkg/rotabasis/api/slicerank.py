"""Commands for slice-rank decompositions, the antichain formula and diagonal certificates."""

from fractions import Fraction
from typing import Optional

from rotabasis.api.io import Outcome, index_list, load_document
from rotabasis.models.scalars import format_scalar
from rotabasis.models.schemas import (
    DecompositionDocument,
    DiagonalCertificateDocument,
    LabelledIndex,
    OrdersDocument,
    PartitionDocument,
    SliceTermDocument,
    TensorDocument,
    dense_residual,
    residual_document,
)
from rotabasis.services.slice_rank import (
    DiagonalCertificate,
    SliceDecomposition,
    SliceRankAnalyzer,
    SliceTerm,
    TotalOrders,
    cyclic_shift,
    diagonal_certificate_for_power,
    is_antichain,
)

COMMANDS = {
    "decompose": "trivial_decomposition",
    "verifydec": "verify_slice_decomposition",
    "antichain": "is_antichain",
    "slicerank": "antichain_slice_rank",
    "shift": "cyclic_shift",
    "diagcert": "diagonal_certificate_for_power",
    "lowerbound": "diagonal_lower_bound",
    "unstable": "instability_witness",
}

analyzer = SliceRankAnalyzer()


def decomposition_document(dec: SliceDecomposition) -> DecompositionDocument:
    return DecompositionDocument(
        terms=[
            SliceTermDocument(
                axis=t.axis,
                vector=[format_scalar(v) for v in t.vector],
                residual=residual_document(t.residual),
            )
            for t in dec.terms
        ]
    )


def decomposition_from_document(doc: DecompositionDocument) -> SliceDecomposition:
    return SliceDecomposition(
        tuple(SliceTerm(t.axis, tuple(Fraction(v) for v in t.vector), dense_residual(t.residual)) for t in doc.terms)
    )


def certificate_document(cert: DiagonalCertificate) -> DiagonalCertificateDocument:
    return DiagonalCertificateDocument(bound=cert.bound, points=[list(p) for p in cert.points])


def _orders(path: Optional[str], d: int, n: int) -> TotalOrders:
    if path is None:
        return TotalOrders.natural(d, n)
    return TotalOrders(tuple(tuple(r) for r in load_document(path, OrdersDocument).orders))


def decompose(args) -> Outcome:
    x = load_document(args.tensor, TensorDocument).to_domain()
    return Outcome(decomposition_document(analyzer.trivial_decomposition(x, args.axis)))


def verify_decomposition(args) -> Outcome:
    x = load_document(args.tensor, TensorDocument).to_domain()
    dec = decomposition_from_document(load_document(args.decomposition, DecompositionDocument))
    ok = analyzer.verify_slice_decomposition(x, dec)
    return Outcome(ok, ok=ok)


def antichain(args) -> Outcome:
    x = load_document(args.tensor, TensorDocument).to_domain()
    ok = is_antichain(x.support_indices(), _orders(args.orders, x.order, x.dim))
    return Outcome(ok, ok=ok)


def slicerank(args) -> Outcome:
    x = load_document(args.tensor, TensorDocument).to_domain()
    value, partition = analyzer.antichain_slice_rank(x, _orders(args.orders, x.order, x.dim))
    return Outcome(
        PartitionDocument(
            value=value,
            partition=[LabelledIndex(i=list(idx), label=label) for idx, label in partition.labels],
        )
    )


def shift(args) -> Outcome:
    return Outcome(list(cyclic_shift(args.index, args.n)))


def diagcert(args) -> Outcome:
    return Outcome(certificate_document(diagonal_certificate_for_power(args.n, args.k)))


def lowerbound(args) -> Outcome:
    x = load_document(args.tensor, TensorDocument).to_domain()
    return Outcome(certificate_document(analyzer.diagonal_lower_bound(x)))


def unstable(args) -> Outcome:
    x = load_document(args.tensor, TensorDocument).to_domain()
    witness = analyzer.instability_witness(x)
    if witness is None:
        return Outcome(None, ok=False, diagnostics=["no decomposition with fewer than n terms was found"])
    return Outcome(decomposition_document(witness))


def register(subparsers) -> None:
    p = subparsers.add_parser("decompose", help="trivial slice decomposition along one axis")
    p.add_argument("--tensor", required=True)
    p.add_argument("--axis", type=int, default=1)
    p.set_defaults(handler=decompose)

    p = subparsers.add_parser("verifydec", help="check that a slice decomposition sums to the tensor")
    p.add_argument("--tensor", required=True)
    p.add_argument("--decomposition", required=True)
    p.set_defaults(handler=verify_decomposition)

    p = subparsers.add_parser("antichain", help="is the support an antichain in the product order")
    p.add_argument("--tensor", required=True)
    p.add_argument("--orders")
    p.set_defaults(handler=antichain)

    p = subparsers.add_parser("slicerank", help="exact slice rank of an antichain-supported tensor")
    p.add_argument("--tensor", required=True)
    p.add_argument("--orders")
    p.set_defaults(handler=slicerank)

    p = subparsers.add_parser("shift", help="cyclic shift of an index tuple")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--index", type=index_list, required=True)
    p.set_defaults(handler=shift)

    p = subparsers.add_parser("diagcert", help="diagonal certificate for E_n tensor power k")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(handler=diagcert)

    p = subparsers.add_parser("lowerbound", help="diagonal lower bound on slice rank")
    p.add_argument("--tensor", required=True)
    p.set_defaults(handler=lowerbound)

    p = subparsers.add_parser("unstable", help="look for a decomposition proving instability")
    p.add_argument("--tensor", required=True)
    p.set_defaults(handler=unstable)
