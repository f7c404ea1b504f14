"""Commands for determinantal tensors and arranging bases."""

from loguru import logger

from rotabasis.api.io import Outcome, load_document
from rotabasis.exceptions import InputValidationError
from rotabasis.models.scalars import format_scalar
from rotabasis.models.schemas import ArrangementDocument, BasesDocument, MatrixListDocument, TensorDocument
from rotabasis.services.determinantal import (
    BasisSequence,
    check_change_of_basis_rule,
    check_transpose_action,
    determinantal_tensor,
)
from rotabasis.services.rota_solver import STRATEGIES, ArrangementMatrix, RotaSolver, arrangement_failures

COMMANDS = {
    "detensor": "determinantal_tensor",
    "transpose": "check_transpose_action",
    "basischange": "check_change_of_basis_rule",
    "rota": "solve_rota",
    "verify": "verify_arrangement",
}


def _bases(path: str) -> BasisSequence:
    return BasisSequence(load_document(path, BasesDocument).to_domain())


def detensor(args) -> Outcome:
    return Outcome(TensorDocument.from_domain(determinantal_tensor(_bases(args.bases))))


def transpose(args) -> Outcome:
    ok = check_transpose_action(_bases(args.bases))
    return Outcome(ok, ok=ok)


def basischange(args) -> Outcome:
    a_list = load_document(args.a, MatrixListDocument).to_domain()
    b_list = load_document(args.b, MatrixListDocument).to_domain()
    ok = check_change_of_basis_rule(a_list, b_list)
    return Outcome(ok, ok=ok)


def rota(args) -> Outcome:
    bases = _bases(args.bases)
    outcome = RotaSolver().solve(bases, args.strategy, args.max_ell)
    logger.info("rota search visited {} nodes", outcome.nodes)
    if not outcome.found:
        return Outcome(
            None,
            ok=False,
            diagnostics=[f"no arrangement with l <= {args.max_ell} ({args.strategy} strategy)"],
        )
    arrangement = outcome.arrangement
    payload = {
        "n": arrangement.n,
        "M": arrangement.M,
        "ell": outcome.ell,
        "strategy": args.strategy,
        "grid": [list(row) for row in arrangement.grid],
    }
    if outcome.witness is not None:
        payload["witness"] = {
            "M": outcome.witness.M,
            "perms": outcome.witness.perms.one_line(),
            "value": format_scalar(outcome.witness.value),
        }
    return Outcome(payload)


def verify(args) -> Outcome:
    bases = _bases(args.bases)
    doc = load_document(args.arrangement, ArrangementDocument)
    problems = doc.shape_problems()
    if doc.n != bases.n:
        problems.append(f"arrangement is for n={doc.n}, bases have n={bases.n}")
    if not problems:
        try:
            problems = arrangement_failures(bases, ArrangementMatrix(doc.grid))
        except InputValidationError as e:
            problems = [e.detail]
    ok = not problems
    return Outcome(ok, ok=ok, diagnostics=problems)


def register(subparsers) -> None:
    p = subparsers.add_parser("detensor", help="determinantal tensor of n bases")
    p.add_argument("--bases", required=True)
    p.set_defaults(handler=detensor)

    p = subparsers.add_parser("transpose", help="check D(B) == (B_1^T, ..., B_n^T) . E_n")
    p.add_argument("--bases", required=True)
    p.set_defaults(handler=transpose)

    p = subparsers.add_parser("basischange", help="check D(A_1 B_1, ...) == (B_1^T, ...) . D(A_1, ...)")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(handler=basischange)

    p = subparsers.add_parser("rota", help="arrange n bases into an n x ln matrix with basis columns")
    p.add_argument("--bases", required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default="direct")
    p.add_argument("--max-ell", dest="max_ell", type=int, default=2)
    p.set_defaults(handler=rota)

    p = subparsers.add_parser("verify", help="check an arrangement against its bases")
    p.add_argument("--bases", required=True)
    p.add_argument("--arrangement", required=True)
    p.set_defaults(handler=verify)
