"""
Searching for a nonzero P_{M,pi}(X): a certificate that X is semistable.

Degrees M = n, 2n, ... are tried in ascending order. Within a degree the
exhaustive strategy walks the canonical permutation tuples in lexicographic
order of their one-line notations; the random strategy draws seeded
uniform tuples and canonicalizes them. Either way the first nonzero value in
that order wins, whatever the worker count.
"""

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice, product
from typing import Iterator, List, Optional, Tuple

from loguru import logger

from rotabasis import config
from rotabasis.exceptions import InputValidationError, UsageError
from rotabasis.models.scalars import Permutation
from rotabasis.models.tensors import Tensor
from rotabasis.services.invariants import (
    InvariantCertificate,
    InvariantEvaluator,
    PermTuple,
    canonicalize_perm_tuple,
    degree_bound,
)

STRATEGIES = ("exhaustive-canonical", "random-sample")


@dataclass(frozen=True)
class SearchOutcome:
    """
    status is "certified", "unstable" (an exhaustive, untruncated search
    that reached the degree bound) or "inconclusive".
    """

    status: str
    certificate: Optional[InvariantCertificate]
    evaluations: int
    max_M: int
    truncated: bool


def _block_partitions(elements: Tuple[int, ...], n: int) -> Iterator[Tuple[int, ...]]:
    """Partitions of `elements` into sorted n-blocks ordered by their heads, flattened, in lexicographic order."""
    if not elements:
        yield ()
        return
    head, rest = elements[0], elements[1:]
    for others in combinations(rest, n - 1):
        remaining = tuple(e for e in rest if e not in others)
        for tail in _block_partitions(remaining, n):
            yield (head,) + others + tail


def canonical_perm_tuples(d: int, n: int, m: int) -> Iterator[PermTuple]:
    """Every canonical form produced by canonicalize_perm_tuple, in lexicographic order."""
    identity = Permutation.identity(m)
    reps = [Permutation(images) for images in _block_partitions(tuple(range(1, m + 1)), n)]
    for rest in product(reps, repeat=d - 1):
        yield PermTuple((identity,) + rest)


def _evaluate_candidate(x: Tensor, m: int, perms: PermTuple, term_cap: int) -> Fraction:
    return InvariantEvaluator(threads=1, term_cap=term_cap).evaluate(x, m, perms)


class SemistabilitySearcher:
    def __init__(self, threads: Optional[int] = None, term_cap: Optional[int] = None):
        self.threads = max(1, config.THREADS if threads is None else threads)
        self.term_cap = config.TERM_CAP if term_cap is None else term_cap

    def _candidates(self, d: int, n: int, m: int, strategy: str, budget: int, rng: random.Random) -> List[PermTuple]:
        if strategy == "exhaustive-canonical":
            return list(islice(canonical_perm_tuples(d, n, m), budget + 1))
        drawn = []
        for _ in range(budget):
            perms = PermTuple(tuple(Permutation(tuple(rng.sample(range(1, m + 1), m))) for _ in range(d)))
            drawn.append(canonicalize_perm_tuple(perms, n)[0])
        return drawn

    def _values(
        self, x: Tensor, m: int, chunk: List[PermTuple], pool: Optional[ProcessPoolExecutor]
    ) -> List[Fraction]:
        if pool is None or len(chunk) == 1:
            return [_evaluate_candidate(x, m, perms, self.term_cap) for perms in chunk]
        return list(pool.map(_evaluate_candidate, [x] * len(chunk), [m] * len(chunk), chunk, [self.term_cap] * len(chunk)))

    def search(
        self,
        x: Tensor,
        max_m: int,
        strategy: str = "exhaustive-canonical",
        sample_budget: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> SearchOutcome:
        """
        `sample_budget` caps the number of evaluations per degree. A search
        that finds nothing reports "inconclusive" unless it was exhaustive,
        never truncated, and max_m reaches the degree bound.
        """
        if strategy not in STRATEGIES:
            raise UsageError(f"Unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
        n, d = x.dim, x.order
        if max_m < n or max_m % n:
            raise InputValidationError(f"max_M={max_m} must be a positive multiple of n={n}")
        budget = config.SAMPLE_BUDGET if sample_budget is None else sample_budget
        if budget < 1:
            raise InputValidationError("The search budget must be at least 1")
        rng = random.Random(config.SEED if seed is None else seed)

        # shared by every degree and batch
        pool = ProcessPoolExecutor(max_workers=self.threads) if self.threads > 1 else None
        try:
            return self._scan(x, max_m, strategy, budget, rng, pool)
        finally:
            if pool is not None:
                pool.shutdown()

    def _scan(
        self,
        x: Tensor,
        max_m: int,
        strategy: str,
        budget: int,
        rng: random.Random,
        pool: Optional[ProcessPoolExecutor],
    ) -> SearchOutcome:
        n, d = x.dim, x.order
        evaluations, truncated = 0, False
        batch = self.threads * 4
        for m in range(n, max_m + 1, n):
            candidates = self._candidates(d, n, m, strategy, budget, rng)
            if len(candidates) > budget:
                candidates, truncated = candidates[:budget], True
            logger.debug("semistability search: M={} candidates={}", m, len(candidates))
            for start in range(0, len(candidates), batch):
                chunk = candidates[start:start + batch]
                values = self._values(x, m, chunk, pool)
                for perms, value in zip(chunk, values):
                    evaluations += 1
                    if value != 0:
                        logger.info("certificate at M={} after {} evaluations: value={}", m, evaluations, value)
                        return SearchOutcome("certified", InvariantCertificate(m, perms, value), evaluations, max_m, truncated)

        reaches_bound = max_m >= degree_bound(d, n).bound
        status = "unstable" if strategy == "exhaustive-canonical" and not truncated and reaches_bound else "inconclusive"
        logger.info("semistability search finished without certificate: status={} evaluations={}", status, evaluations)
        return SearchOutcome(status, None, evaluations, max_m, truncated)
