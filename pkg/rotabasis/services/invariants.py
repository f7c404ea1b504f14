"""
SL(n)^d-invariant polynomials

    P_{M,pi}(X) = sum_{J_1..J_d : [M] -> [n]} prod_k eps(J_k o pi_k) prod_i X(J_1(i), ..., J_d(i))

where eps(J) multiplies the Levi-Civita symbols of J over consecutive blocks
of length n. Only maps with K_k = J_k o pi_k a permutation on every block
contribute, so the evaluator enumerates those K_k (J_k = K_k o pi_k^{-1})
position by position, and only through support entries of X.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial, prod
from typing import List, Optional, Sequence, Tuple

from loguru import logger

from rotabasis import config
from rotabasis.exceptions import InputValidationError, ResourceGuardError
from rotabasis.models.scalars import Permutation, count_inversions
from rotabasis.models.tensors import Index, SquareMatrix, Tensor
from rotabasis.services.linear_algebra import determinant
from rotabasis.services.tensor_algebra import levi_civita_symbol, multilinear_product


@dataclass(frozen=True)
class PermTuple:
    """(pi_1, ..., pi_d), all permutations of the same [M]."""

    perms: Tuple[Permutation, ...]

    def __post_init__(self):
        perms = tuple(p if isinstance(p, Permutation) else Permutation(tuple(p)) for p in self.perms)
        if not perms:
            raise InputValidationError("A permutation tuple needs at least one permutation")
        if len({len(p) for p in perms}) != 1:
            raise InputValidationError("All permutations must have the same degree M")
        object.__setattr__(self, "perms", perms)

    @classmethod
    def identity(cls, d: int, m: int) -> "PermTuple":
        return cls(tuple(Permutation.identity(m) for _ in range(d)))

    @property
    def M(self) -> int:
        return len(self.perms[0])

    @property
    def d(self) -> int:
        return len(self.perms)

    def one_line(self) -> List[List[int]]:
        return [p.one_line() for p in self.perms]


@dataclass(frozen=True)
class InvariantCertificate:
    """P_{M,perms}(X) = value != 0 witnesses that X is semistable."""

    M: int
    perms: PermTuple
    value: Fraction

    def __post_init__(self):
        if self.value == 0:
            raise InputValidationError("A certificate must carry a nonzero value")
        if self.perms.M != self.M:
            raise InputValidationError("Certificate permutations do not have degree M")


@dataclass(frozen=True)
class DegreeBound:
    d: int
    n: int
    bound: int


def block_sign(j: Sequence[int], n: int) -> int:
    """eps(J): product of Levi-Civita symbols over consecutive n-blocks of J."""
    if n < 1 or len(j) % n:
        raise InputValidationError(f"Map length {len(j)} is not a multiple of n={n}")
    if any(not 1 <= v <= n for v in j):
        raise InputValidationError(f"Map values must lie in [1, {n}]")
    sign = 1
    for start in range(0, len(j), n):
        sign *= int(levi_civita_symbol(tuple(j[start:start + n])))
        if sign == 0:
            break
    return sign


def degree_bound(d: int, n: int) -> DegreeBound:
    """M <= d^{d n^2 - d} n^d."""
    if d < 1 or n < 1:
        raise InputValidationError("degree_bound needs d, n >= 1")
    return DegreeBound(d, n, d ** (d * n * n - d) * n ** d)


def multiplicity_bound(n: int) -> int:
    """Upper bound on l = M / n implied by the degree bound at d = n."""
    return degree_bound(n, n).bound // n


def admissible_term_count(n: int, d: int, m: int) -> int:
    return factorial(n) ** ((m // n) * d)


def canonicalize_perm_tuple(perms: PermTuple, n: int) -> Tuple[PermTuple, int]:
    """
    Returns (canonical, sign) with P_{M,perms} = sign * P_{M,canonical}.

    Simultaneous left composition by pi_1^{-1} reindexes the product over i and
    leaves P unchanged, so pi_1 becomes the identity. Each remaining pi_k is
    then reduced modulo right composition with block-preserving
    permutations: values inside a block are sorted (costing the sign of the
    sorting permutation) and blocks are ordered by their smallest value
    (costing nothing).
    """
    m = perms.M
    if m % n:
        raise InputValidationError(f"M={m} is not divisible by n={n}")
    lead_inverse = perms.perms[0].inverse()
    sign = 1
    canonical = [Permutation.identity(m)]
    for p in perms.perms[1:]:
        images = lead_inverse.compose(p).images
        blocks = []
        for start in range(0, m, n):
            block = images[start:start + n]
            if count_inversions(block) % 2:
                sign = -sign
            blocks.append(tuple(sorted(block)))
        blocks.sort()
        canonical.append(Permutation(tuple(v for block in blocks for v in block)))
    return PermTuple(tuple(canonical)), sign


# Evaluation plan shipped to worker processes: plain tuples only.
_Plan = Tuple[int, int, int, Tuple[Tuple[Index, Fraction], ...], Tuple[Tuple[Tuple[int, int], ...], ...]]


def _build_plan(x: Tensor, m: int, perms: PermTuple) -> _Plan:
    n, d = x.dim, x.order
    inverses = [p.inverse() for p in perms.perms]
    # slots[i][k] = (block, offset) of K_k receiving J_k(i + 1)
    slots = tuple(
        tuple(divmod(inv(i) - 1, n) for inv in inverses)
        for i in range(1, m + 1)
    )
    return n, d, m, tuple(x.support()), slots


def _partial_sum(plan: _Plan, first: Sequence[int]) -> Tuple[Fraction, int, int]:
    """
    Sum of the terms whose position-1 support choice lies in `first`.
    Returns (sum, contributing terms, search nodes).
    """
    n, d, m, support, slots = plan
    blocks = m // n
    used = [[0] * blocks for _ in range(d)]
    placed: List[List[List[Tuple[int, int]]]] = [[[] for _ in range(blocks)] for _ in range(d)]
    total = Fraction(0)
    leaves = nodes = 0

    def place(i: int, idx: Index) -> Optional[int]:
        """Inversion count added by putting idx at position i, None if a block repeats a value."""
        flips = 0
        for k in range(d):
            b, _ = slots[i][k]
            if used[k][b] >> idx[k] & 1:
                return None
        for k in range(d):
            b, o = slots[i][k]
            v = idx[k]
            for o2, v2 in placed[k][b]:
                if (o2 < o and v2 > v) or (o2 > o and v2 < v):
                    flips += 1
            used[k][b] |= 1 << v
            placed[k][b].append((o, v))
        return flips

    def unplace(i: int, idx: Index) -> None:
        for k in range(d):
            b, _ = slots[i][k]
            used[k][b] &= ~(1 << idx[k])
            placed[k][b].pop()

    def descend(i: int, acc: Fraction, parity: int, choices) -> None:
        nonlocal total, leaves, nodes
        nodes += 1
        if i == m:
            total += -acc if parity else acc
            leaves += 1
            return
        for c in choices:
            idx, value = support[c]
            flips = place(i, idx)
            if flips is None:
                continue
            descend(i + 1, acc * value, (parity + flips) & 1, range(len(support)))
            unplace(i, idx)

    descend(0, Fraction(1), 0, first)
    return total, leaves, nodes


class InvariantEvaluator:
    """
    Exact evaluation of P_{M,pi}. Parallel runs split the support choices
    for position 1 into contiguous chunks and add the partial sums in chunk
    order.
    """

    # below this many admissible terms a process pool costs more than it saves
    parallel_threshold = 20000

    def __init__(self, threads: Optional[int] = None, term_cap: Optional[int] = None):
        self.threads = max(1, config.THREADS if threads is None else threads)
        self.term_cap = config.TERM_CAP if term_cap is None else term_cap
        self.last_stats = {}

    def _check_shape(self, x: Tensor, m: int, perms: PermTuple) -> None:
        if m < 1 or m % x.dim:
            raise InputValidationError(f"M={m} must be a positive multiple of n={x.dim}")
        if perms.d != x.order:
            raise InputValidationError(f"Expected {x.order} permutations, got {perms.d}")
        if perms.M != m:
            raise InputValidationError(f"Permutations have degree {perms.M}, expected M={m}")

    def evaluate(self, x: Tensor, m: int, perms: PermTuple) -> Fraction:
        self._check_shape(x, m, perms)
        admissible = admissible_term_count(x.dim, x.order, m)
        if admissible > self.term_cap:
            raise ResourceGuardError(
                f"P_(M={m}) on a {x.order}-tensor of dim {x.dim} spans {admissible} admissible terms "
                f"(cap {self.term_cap})"
            )

        plan = _build_plan(x, m, perms)
        choices = list(range(len(plan[3])))
        workers = min(self.threads, len(choices)) if admissible >= self.parallel_threshold else 1
        if workers <= 1:
            results = [_partial_sum(plan, choices)]
        else:
            size = -(-len(choices) // workers)
            chunks = [choices[s:s + size] for s in range(0, len(choices), size)]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_partial_sum, [plan] * len(chunks), chunks))

        value = sum((r[0] for r in results), Fraction(0))
        self.last_stats = {
            "admissible_terms": admissible,
            "contributing_terms": sum(r[1] for r in results),
            "search_nodes": sum(r[2] for r in results),
            "workers": max(1, workers),
        }
        logger.debug("P_(M={}) evaluated: value={} stats={}", m, value, self.last_stats)
        return value

    def naive(self, x: Tensor, m: int, perms: PermTuple) -> Fraction:
        """The defining sum over all n^{dM} tuples of maps."""
        self._check_shape(x, m, perms)
        n, d = x.dim, x.order
        terms = n ** (d * m)
        if terms > self.term_cap:
            raise ResourceGuardError(f"Naive sum has {terms} terms (cap {self.term_cap})")

        entries = x.to_dense()
        maps = list(product(range(1, n + 1), repeat=m))
        signs = [{j: block_sign([j[p(i) - 1] for i in range(1, m + 1)], n) for j in maps} for p in perms.perms]
        total = Fraction(0)
        for js in product(maps, repeat=d):
            sign = prod(signs[k][js[k]] for k in range(d))
            if sign == 0:
                continue
            total += sign * prod((entries.entry(tuple(j[i] for j in js)) for i in range(m)), start=Fraction(1))
        self.last_stats = {"naive_terms": terms}
        return total

    def relative_invariance_sides(
        self, x: Tensor, mats: Sequence[SquareMatrix], m: int, perms: PermTuple
    ) -> Tuple[Fraction, Fraction]:
        """(P((A_1..A_d).X), P(X) * prod_k det(A_k)^{M/n})."""
        self._check_shape(x, m, perms)
        dets = [determinant(a) for a in mats]
        if any(det == 0 for det in dets):
            raise InputValidationError("Relative invariance needs invertible matrices")
        lhs = self.evaluate(multilinear_product(mats, x), m, perms)
        rhs = self.evaluate(x, m, perms) * prod((det ** (m // x.dim) for det in dets), start=Fraction(1))
        return lhs, rhs

    def check_relative_invariance(self, x: Tensor, mats: Sequence[SquareMatrix], m: int, perms: PermTuple) -> bool:
        lhs, rhs = self.relative_invariance_sides(x, mats, m, perms)
        return lhs == rhs
