"""
Arranging n bases of Q^n into an n x ln matrix whose row i uses every vector
of B_i exactly l times and whose columns are all bases.

Two strategies:
  - "direct": column-by-column backtracking with incremental elimination;
  - "invariant": a search for one nonzero term of P_{M,pi}(D) for the
    determinantal tensor D, i.e. balanced maps J_1..J_n whose columns all
    have nonzero determinant. The term's permutations are returned with it.
Columns are interchangeable, so both searches only build arrangements whose
column index tuples are in lexicographically nondecreasing order.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from loguru import logger

from rotabasis import config
from rotabasis.exceptions import InputValidationError, ResourceGuardError, UsageError
from rotabasis.models.scalars import Permutation
from rotabasis.services.determinantal import BasisSequence, determinantal_tensor
from rotabasis.services.invariants import PermTuple
from rotabasis.services.linear_algebra import IndependenceTracker

STRATEGIES = ("direct", "invariant")


@dataclass(frozen=True)
class ArrangementMatrix:
    """grid[i][j] is the index c_ij: cell (i, j) holds the vector B_i[c_ij]."""

    grid: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        grid = tuple(tuple(row) for row in self.grid)
        if not grid or not grid[0]:
            raise InputValidationError("An arrangement needs at least one row and one column")
        if len({len(row) for row in grid}) != 1:
            raise InputValidationError("Arrangement rows have different lengths")
        n = len(grid)
        if any(isinstance(c, bool) or not isinstance(c, int) or not 1 <= c <= n for row in grid for c in row):
            raise InputValidationError(f"Arrangement entries must lie in [1, {n}]")
        object.__setattr__(self, "grid", grid)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "ArrangementMatrix":
        return cls(tuple(zip(*columns)))

    @property
    def n(self) -> int:
        return len(self.grid)

    @property
    def M(self) -> int:
        return len(self.grid[0])

    def column(self, j: int) -> Tuple[int, ...]:
        """Index tuple of column j (1-based)."""
        return tuple(row[j - 1] for row in self.grid)

    def columns(self) -> List[Tuple[int, ...]]:
        return [self.column(j) for j in range(1, self.M + 1)]

    def resolved(self, bases: BasisSequence) -> List[List[Tuple[Fraction, ...]]]:
        """The vector view: row i, column j is B_i[c_ij]."""
        return [[bases[i + 1][c] for c in row] for i, row in enumerate(self.grid)]

    def permute_columns(self, order: Sequence[int]) -> "ArrangementMatrix":
        return ArrangementMatrix.from_columns([self.column(j) for j in order])


@dataclass(frozen=True)
class TermWitness:
    """A nonzero term of P_{M,perms}(D): every eps(J_k o pi_k) is +1 and value = prod_i D(column i)."""

    M: int
    perms: PermTuple
    value: Fraction


@dataclass(frozen=True)
class RotaOutcome:
    found: bool
    ell: Optional[int]
    arrangement: Optional[ArrangementMatrix]
    witness: Optional[TermWitness]
    nodes: int


def arrangement_failures(bases: BasisSequence, arrangement: ArrangementMatrix) -> List[str]:
    """Human-readable reasons the arrangement violates a row or column condition; empty when valid."""
    n = bases.n
    if arrangement.n != n:
        return [f"arrangement has {arrangement.n} rows, expected {n}"]
    if arrangement.M % n:
        return [f"M={arrangement.M} is not divisible by n={n}"]
    ell = arrangement.M // n
    failures = []
    for i, row in enumerate(arrangement.grid, start=1):
        counts = Counter(row)
        if any(counts[v] != ell for v in range(1, n + 1)):
            failures.append(f"row {i} does not use each vector of B_{i} exactly {ell} times")
    for j, col in enumerate(arrangement.columns(), start=1):
        if bases.column_determinant(col) == 0:
            failures.append(f"column {j} {list(col)} is not a basis")
    return failures


def verify_arrangement(bases: BasisSequence, arrangement: ArrangementMatrix) -> bool:
    failures = arrangement_failures(bases, arrangement)
    for reason in failures:
        logger.info("arrangement rejected: {}", reason)
    return not failures


def balancing_perms(grid: Sequence[Sequence[int]], n: int) -> PermTuple:
    """
    For balanced rows J_k, permutations pi_k with J_k o pi_k the identity on
    every block: block b collects the (b+1)-th occurrence of each value.
    """
    perms = []
    for row in grid:
        occurrences = {v: [p for p, c in enumerate(row, start=1) if c == v] for v in range(1, n + 1)}
        ell = len(row) // n
        perms.append(Permutation(tuple(occurrences[v][b] for b in range(ell) for v in range(1, n + 1))))
    return PermTuple(tuple(perms))


class RotaSolver:
    def __init__(self, node_cap: Optional[int] = None):
        self.node_cap = config.SEARCH_NODE_CAP if node_cap is None else node_cap
        self._nodes = 0

    def _tick(self) -> None:
        self._nodes += 1
        if self._nodes > self.node_cap:
            raise ResourceGuardError(f"Rota search exceeded {self.node_cap} nodes")

    def solve(self, bases: BasisSequence, strategy: str = "direct", max_ell: int = 2) -> RotaOutcome:
        """Smallest l <= max_ell with an arrangement; found=False when none exists in that range."""
        if strategy not in STRATEGIES:
            raise UsageError(f"Unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
        if max_ell < 1:
            raise InputValidationError("max_ell must be at least 1")
        self._nodes = 0
        search = self._direct if strategy == "direct" else self._invariant
        for ell in range(1, max_ell + 1):
            columns = search(bases, ell)
            logger.debug("rota {} search: l={} nodes={} found={}", strategy, ell, self._nodes, columns is not None)
            if columns is not None:
                arrangement = ArrangementMatrix.from_columns(columns)
                witness = self._witness(bases, arrangement) if strategy == "invariant" else None
                return RotaOutcome(True, ell, arrangement, witness, self._nodes)
        return RotaOutcome(False, None, None, None, self._nodes)

    def _direct(self, bases: BasisSequence, ell: int) -> Optional[List[Tuple[int, ...]]]:
        n = bases.n
        m = ell * n
        capacity = [[ell] * n for _ in range(n)]
        columns: List[Tuple[int, ...]] = []

        def fill(previous: Tuple[int, ...]) -> bool:
            if len(columns) == m:
                return True
            return choose(0, [], previous, True, IndependenceTracker(n))

        def choose(row: int, partial: List[int], previous: Tuple[int, ...], tight: bool, tracker: IndependenceTracker) -> bool:
            self._tick()
            if row == n:
                columns.append(tuple(partial))
                if fill(tuple(partial)):
                    return True
                columns.pop()
                return False
            low = previous[row] if tight and previous else 1
            for v in range(low, n + 1):
                if capacity[row][v - 1] == 0 or not tracker.push(bases[row + 1][v]):
                    continue
                capacity[row][v - 1] -= 1
                partial.append(v)
                if choose(row + 1, partial, previous, tight and v == low, tracker):
                    return True
                partial.pop()
                capacity[row][v - 1] += 1
                tracker.pop()
            return False

        return list(columns) if fill(()) else None

    def _invariant(self, bases: BasisSequence, ell: int) -> Optional[List[Tuple[int, ...]]]:
        n = bases.n
        m = ell * n
        support = determinantal_tensor(bases).support_indices()  # sorted, nonzero determinants only
        counts = [[0] * n for _ in range(n)]
        columns: List[Tuple[int, ...]] = []

        def extend(start: int) -> bool:
            self._tick()
            if len(columns) == m:
                return True
            for pos in range(start, len(support)):
                idx = support[pos]
                if any(counts[k][v - 1] == ell for k, v in enumerate(idx)):
                    continue
                for k, v in enumerate(idx):
                    counts[k][v - 1] += 1
                columns.append(idx)
                if extend(pos):
                    return True
                columns.pop()
                for k, v in enumerate(idx):
                    counts[k][v - 1] -= 1
            return False

        return list(columns) if extend(0) else None

    def _witness(self, bases: BasisSequence, arrangement: ArrangementMatrix) -> TermWitness:
        value = Fraction(1)
        for col in arrangement.columns():
            value *= bases.column_determinant(col)
        return TermWitness(arrangement.M, balancing_perms(arrangement.grid, bases.n), value)
