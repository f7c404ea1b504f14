"""Commands for the invariant polynomials, semistability search and Latin squares."""

from loguru import logger

from rotabasis.api.io import Outcome, index_list, load_document
from rotabasis.exceptions import InputValidationError
from rotabasis.models.scalars import format_scalar
from rotabasis.models.schemas import CertificateDocument, MatrixListDocument, PermsDocument, TensorDocument
from rotabasis.services.invariants import (
    InvariantEvaluator,
    PermTuple,
    block_sign,
    canonicalize_perm_tuple,
    degree_bound,
    multiplicity_bound,
)
from rotabasis.services.latin_squares import LatinSquareCounter
from rotabasis.services.semistability import STRATEGIES, SemistabilitySearcher

COMMANDS = {
    "blocksign": "block_sign",
    "invariant": ("evaluate_invariant", "naive_invariant"),
    "relinv": "check_relative_invariance",
    "semistable": "semistability_search",
    "canon": "canonicalize_perm_tuple",
    "bound": "degree_bound",
    "mbound": "multiplicity_bound",
    "atdiff": "alon_tarsi_difference",
}

counter = LatinSquareCounter()


def _perms(path: str) -> PermTuple:
    return PermTuple(tuple(load_document(path, PermsDocument).to_domain()))


def blocksign(args) -> Outcome:
    return Outcome(block_sign(args.map, args.n))


def invariant(args) -> Outcome:
    x = load_document(args.tensor, TensorDocument).to_domain()
    perms = _perms(args.perms)
    evaluator = InvariantEvaluator(threads=args.threads)
    if args.method == "naive":
        value = evaluator.naive(x, args.M, perms)
    else:
        value = evaluator.evaluate(x, args.M, perms)
    logger.info("invariant statistics: {}", evaluator.last_stats)
    return Outcome(format_scalar(value))


def relinv(args) -> Outcome:
    x = load_document(args.tensor, TensorDocument).to_domain()
    mats = load_document(args.mats, MatrixListDocument).to_domain()
    if len(mats) != x.order:
        raise InputValidationError(f"Expected {x.order} matrices, got {len(mats)}")
    lhs, rhs = InvariantEvaluator(threads=args.threads).relative_invariance_sides(x, mats, args.M, _perms(args.perms))
    logger.info("relative invariance: lhs={} rhs={}", lhs, rhs)
    ok = lhs == rhs
    return Outcome(ok, ok=ok)


def semistable(args) -> Outcome:
    x = load_document(args.tensor, TensorDocument).to_domain()
    searcher = SemistabilitySearcher(threads=args.threads)
    outcome = searcher.search(x, args.max_M, args.strategy, args.budget, args.seed)
    certificate = None
    if outcome.certificate is not None:
        cert = outcome.certificate
        certificate = CertificateDocument(M=cert.M, perms=cert.perms.one_line(), value=format_scalar(cert.value)).model_dump()
    payload = {
        "status": outcome.status,
        "certificate": certificate,
        "evaluations": outcome.evaluations,
        "max_M": outcome.max_M,
        "truncated": outcome.truncated,
    }
    return Outcome(payload, ok=outcome.status == "certified")


def canon(args) -> Outcome:
    canonical, sign = canonicalize_perm_tuple(_perms(args.perms), args.n)
    return Outcome({"perms": canonical.one_line(), "sign": sign})


def bound(args) -> Outcome:
    return Outcome(degree_bound(args.d, args.n).bound)


def mbound(args) -> Outcome:
    return Outcome(multiplicity_bound(args.n))


def atdiff(args) -> Outcome:
    tally = counter.tally(args.n)
    return Outcome(
        {"n": tally.n, "total": tally.total, "even": tally.even, "odd": tally.odd, "difference": tally.difference}
    )


def register(subparsers) -> None:
    p = subparsers.add_parser("blocksign", help="block sign of a map J : [M] -> [n]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--map", type=index_list, required=True)
    p.set_defaults(handler=blocksign)

    p = subparsers.add_parser("invariant", help="evaluate P_{M,perms}(X)")
    p.add_argument("--tensor", required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--perms", required=True)
    p.add_argument("--method", choices=["pruned", "naive"], default="pruned")
    p.set_defaults(handler=invariant)

    p = subparsers.add_parser("relinv", help="check relative GL-invariance of P_{M,perms}")
    p.add_argument("--tensor", required=True)
    p.add_argument("--mats", required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--perms", required=True)
    p.set_defaults(handler=relinv)

    p = subparsers.add_parser("semistable", help="search for a nonzero invariant")
    p.add_argument("--tensor", required=True)
    p.add_argument("--max-M", dest="max_M", type=int, required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default="exhaustive-canonical")
    p.add_argument("--budget", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(handler=semistable)

    p = subparsers.add_parser("canon", help="canonical form of a permutation tuple")
    p.add_argument("--perms", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=canon)

    p = subparsers.add_parser("bound", help="degree bound d^(d n^2 - d) n^d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=bound)

    p = subparsers.add_parser("mbound", help="multiplicity bound implied by the degree bound")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=mbound)

    p = subparsers.add_parser("atdiff", help="signed count of Latin squares of order n")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=atdiff)
