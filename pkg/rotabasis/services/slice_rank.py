"""
Slice-rank machinery.

General slice rank has no algorithm here. What is exposed: the trivial
decomposition (upper bound n), decomposition checking, the exact value on
antichain supports via the partition formula, and diagonal certificates
(lower bounds on antichain supports).
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
from loguru import logger

from rotabasis import config
from rotabasis.exceptions import InputValidationError, PreconditionError, ResourceGuardError
from rotabasis.models.scalars import Permutation
from rotabasis.models.tensors import DenseTensor, Index, Tensor
from rotabasis.services.linear_algebra import column_row_factorization, matrix_rank
from rotabasis.services.tensor_algebra import as_matrix_rows, flatten_power_index


@dataclass(frozen=True)
class TotalOrders:
    """
    d total orders on [n]. ranks[k][v - 1] is the rank of element v under
    the (k+1)-th order; smaller rank means smaller element.
    """

    ranks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        ranks = tuple(tuple(r) for r in self.ranks)
        if not ranks:
            raise InputValidationError("At least one order is required")
        if len({len(r) for r in ranks}) != 1:
            raise InputValidationError("All orders must rank the same ground set")
        for r in ranks:
            Permutation(r)  # rank maps must be bijections onto [n]
        object.__setattr__(self, "ranks", ranks)

    @property
    def d(self) -> int:
        return len(self.ranks)

    @property
    def n(self) -> int:
        return len(self.ranks[0])

    @classmethod
    def natural(cls, d: int, n: int) -> "TotalOrders":
        return cls(tuple(tuple(range(1, n + 1)) for _ in range(d)))

    @classmethod
    def lexicographic(cls, base: "TotalOrders", k: int) -> "TotalOrders":
        """
        Orders on [n^k] read as [n]^k through the lexicographic pairing: each
        coordinate compares digit tuples lexicographically under its base order.
        """
        n = base.n
        ranks = []
        for r in base.ranks:
            ranks.append(
                tuple(
                    flatten_power_index([r[digit - 1] for digit in digits], n)
                    for digits in product(range(1, n + 1), repeat=k)
                )
            )
        return cls(tuple(ranks))

    def with_reversed(self, axis: int) -> "TotalOrders":
        ranks = list(self.ranks)
        ranks[axis - 1] = tuple(self.n + 1 - r for r in ranks[axis - 1])
        return TotalOrders(tuple(ranks))

    def leq(self, x: Index, y: Index) -> bool:
        """Product order: x <= y in every coordinate's own order."""
        return all(r[a - 1] <= r[b - 1] for r, a, b in zip(self.ranks, x, y))


@dataclass(frozen=True)
class SliceTerm:
    """T(i) = vector(i_axis) * residual(i without i_axis)."""

    axis: int
    vector: Tuple[Fraction, ...]
    residual: DenseTensor

    def expand(self) -> np.ndarray:
        outer = np.multiply.outer(np.array(self.vector, dtype=object), self.residual.array)
        return np.moveaxis(outer, 0, self.axis - 1)


@dataclass(frozen=True)
class SliceDecomposition:
    terms: Tuple[SliceTerm, ...]

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class SupportPartition:
    """Each support index labelled with the axis (1-based) whose projection pays for it."""

    labels: Tuple[Tuple[Index, int], ...]

    def part(self, axis: int) -> List[Index]:
        return [idx for idx, label in self.labels if label == axis]

    def cost(self, d: int) -> int:
        return sum(len({idx[axis - 1] for idx in self.part(axis)}) for axis in range(1, d + 1))


@dataclass(frozen=True)
class DiagonalCertificate:
    """Support points pairwise different in every coordinate; |points| bounds slice rank below."""

    points: Tuple[Index, ...]

    def __post_init__(self):
        points = tuple(sorted(tuple(p) for p in self.points))
        for x, y in combinations(points, 2):
            if any(a == b for a, b in zip(x, y)):
                raise InputValidationError(f"Certificate points {x} and {y} share a coordinate")
        object.__setattr__(self, "points", points)

    @property
    def bound(self) -> int:
        return len(self.points)

    def inside_support(self, x: Tensor) -> bool:
        return all(x.entry(p) != 0 for p in self.points)


def _pairwise_distinct(x: Index, y: Index) -> bool:
    return all(a != b for a, b in zip(x, y))


def _greedy_diagonal(points: Sequence[Index]) -> List[Index]:
    chosen: List[Index] = []
    for p in points:
        if all(_pairwise_distinct(p, q) for q in chosen):
            chosen.append(p)
    return chosen


def is_antichain(support: Sequence[Index], orders: TotalOrders) -> bool:
    """True iff no two distinct points are comparable in the product order."""
    points = sorted(set(tuple(p) for p in support))
    if points and (len(points[0]) != orders.d or any(not 1 <= v <= orders.n for p in points for v in p)):
        raise InputValidationError("Support indices do not match the orders' shape")
    for x, y in combinations(points, 2):
        if orders.leq(x, y) or orders.leq(y, x):
            return False
    return True


def cyclic_shift(index: Sequence[int], n: int) -> Index:
    """rho: every entry v -> v + 1, with n -> 1."""
    if any(not 1 <= v <= n for v in index):
        raise InputValidationError(f"Entries of {tuple(index)} must lie in [1, {n}]")
    return tuple(v % n + 1 for v in index)


def diagonal_certificate_for_power(n: int, k: int) -> DiagonalCertificate:
    """
    S = {(i, rho i, ..., rho^{n-1} i) : i in [n]^k} inside the support of
    E_n^{(x)k}, each coordinate flattened to [n^k].
    """
    if n < 1 or k < 1:
        raise InputValidationError("diagonal_certificate_for_power needs n, k >= 1")
    points = []
    for digits in product(range(1, n + 1), repeat=k):
        orbit, cur = [], tuple(digits)
        for _ in range(n):
            orbit.append(flatten_power_index(cur, n))
            cur = cyclic_shift(cur, n)
        points.append(tuple(orbit))
    return DiagonalCertificate(tuple(points))


class SliceRankAnalyzer:
    """
    Configured slice-rank operations: the partition search and the diagonal
    lower bound carry size limits.
    """

    def __init__(self, exact_diagonal_limit: Optional[int] = None, node_cap: Optional[int] = None):
        self.exact_diagonal_limit = config.EXACT_DIAGONAL_LIMIT if exact_diagonal_limit is None else exact_diagonal_limit
        self.node_cap = config.SEARCH_NODE_CAP if node_cap is None else node_cap

    # Decompositions

    def trivial_decomposition(self, x: Tensor, axis: int = 1) -> SliceDecomposition:
        """
        T(i) = sum_l delta(i_axis, l) T(..., l, ...): one term per nonzero
        slice, so at most n terms. The zero tensor gets the empty decomposition.
        """
        if not 1 <= axis <= x.order:
            raise InputValidationError(f"Axis {axis} out of range [1, {x.order}]")
        dense = x.to_dense()
        terms = []
        for value in range(1, x.dim + 1):
            residual = dense.slice(axis, value)
            if residual.is_zero():
                continue
            e = tuple(Fraction(int(i == value)) for i in range(1, x.dim + 1))
            terms.append(SliceTerm(axis, e, residual))
        return SliceDecomposition(tuple(terms))

    def verify_slice_decomposition(self, x: Tensor, dec: SliceDecomposition) -> bool:
        total = DenseTensor.zeros(x.order, x.dim).array
        for term in dec.terms:
            if not 1 <= term.axis <= x.order:
                raise InputValidationError(f"Term axis {term.axis} out of range [1, {x.order}]")
            if len(term.vector) != x.dim or term.residual.order != x.order - 1 or term.residual.dim != x.dim:
                raise InputValidationError("Decomposition term does not match the tensor's shape")
            total = total + term.expand()
        return DenseTensor(total, dim=x.dim) == x

    def instability_witness(self, x: Tensor) -> Optional[SliceDecomposition]:
        """
        A verified decomposition with fewer than n terms, which proves X
        unstable; None when neither the slice counts nor (for d = 2) the
        matrix rank exhibit one.
        """
        dense = x.to_dense()
        counts = [
            sum(1 for v in range(1, x.dim + 1) if not dense.slice(axis, v).is_zero())
            for axis in range(1, x.order + 1)
        ]
        best_axis = min(range(1, x.order + 1), key=lambda a: (counts[a - 1], a))
        if counts[best_axis - 1] < x.dim:
            logger.debug("instability witness: axis {} has {} nonzero slices", best_axis, counts[best_axis - 1])
            return self.trivial_decomposition(x, best_axis)

        if x.order == 2:
            rows = as_matrix_rows(x)
            if matrix_rank(rows) < x.dim:
                columns, row_basis = column_row_factorization(rows)
                terms = tuple(
                    SliceTerm(1, tuple(col), DenseTensor(row, dim=x.dim)) for col, row in zip(columns, row_basis)
                )
                return SliceDecomposition(terms)
        return None

    # Antichain formula

    def antichain_slice_rank(self, x: Tensor, orders: Optional[TotalOrders] = None) -> Tuple[int, SupportPartition]:
        """
        min over partitions Gamma = Gamma_1 u ... u Gamma_d of sum_j |pi_j(Gamma_j)|,
        which is the slice rank when the support is an antichain. Returns
        the value and the lexicographically least optimal labelling.
        """
        orders = orders or TotalOrders.natural(x.order, x.dim)
        if orders.d != x.order or orders.n != x.dim:
            raise InputValidationError("Orders do not match the tensor's shape")
        points = x.support_indices()
        if not is_antichain(points, orders):
            raise PreconditionError("Support is not an antichain under the given orders")
        if not points:
            return 0, SupportPartition(())

        value = self._minimum_cost(points, x.order)
        labels = self._least_labelling(points, x.order, value)
        return value, SupportPartition(tuple(zip(points, labels)))

    def _minimum_cost(self, points: List[Index], d: int) -> int:
        """
        Branch and bound on the paid projections. A point with an already
        paid coordinate is assigned to that axis for free; a free point
        branches over the d axes.
        """
        projections = [len({p[j] for p in points}) for j in range(d)]
        best = min(projections)
        paid: List[Set[int]] = [set() for _ in range(d)]
        seen: Dict[Tuple[frozenset, ...], int] = {}
        nodes = 0

        def free_points() -> List[Index]:
            return [p for p in points if not any(p[j] in paid[j] for j in range(d))]

        def search(cost: int) -> None:
            nonlocal best, nodes
            nodes += 1
            if nodes > self.node_cap:
                raise ResourceGuardError(f"Slice-rank search exceeded {self.node_cap} nodes")
            free = free_points()
            if not free:
                best = min(best, cost)
                return
            if cost + len(_greedy_diagonal(free)) >= best:
                return
            state = tuple(frozenset(s) for s in paid)
            if seen.get(state, best + 1) <= cost:
                return
            seen[state] = cost

            p = free[0]
            for j in range(d):
                paid[j].add(p[j])
                search(cost + 1)
                paid[j].discard(p[j])

        search(0)
        logger.debug("antichain slice rank: value={} nodes={} states={}", best, nodes, len(seen))
        return best

    def _least_labelling(self, points: List[Index], d: int, value: int) -> List[int]:
        """First labelling in lexicographic order (points sorted, labels ascending) that costs `value`."""
        paid: List[Dict[int, int]] = [{} for _ in range(d)]
        labels: List[int] = []
        nodes = 0

        def lower_bound(start: int) -> int:
            free = [p for p in points[start:] if not any(p[j] in paid[j] for j in range(d))]
            return len(_greedy_diagonal(free))

        def search(t: int, cost: int) -> bool:
            nonlocal nodes
            nodes += 1
            if nodes > self.node_cap:
                raise ResourceGuardError(f"Slice-rank labelling exceeded {self.node_cap} nodes")
            if t == len(points):
                return cost == value
            p = points[t]
            for j in range(d):
                new = p[j] not in paid[j]
                paid[j][p[j]] = paid[j].get(p[j], 0) + 1
                labels.append(j + 1)
                if cost + new + lower_bound(t + 1) <= value and search(t + 1, cost + new):
                    return True
                labels.pop()
                paid[j][p[j]] -= 1
                if paid[j][p[j]] == 0:
                    del paid[j][p[j]]
            return False

        if not search(0, 0):
            raise RuntimeError("No labelling reaches the minimum found by the search")
        return labels

    # Certificates

    def diagonal_lower_bound(self, x: Tensor) -> DiagonalCertificate:
        """
        Largest (exact up to `exact_diagonal_limit` support points, greedy
        beyond) subset of the support whose points differ in every coordinate.
        """
        points = x.support_indices()
        if len(points) > self.exact_diagonal_limit:
            return DiagonalCertificate(tuple(_greedy_diagonal(points)))

        best: List[Index] = _greedy_diagonal(points)

        def extend(chosen: List[Index], candidates: List[Index]) -> None:
            nonlocal best
            if len(chosen) > len(best):
                best = list(chosen)
            if len(chosen) + len(candidates) <= len(best):
                return
            for pos, p in enumerate(candidates):
                if len(chosen) + len(candidates) - pos <= len(best):
                    return
                rest = [q for q in candidates[pos + 1:] if _pairwise_distinct(p, q)]
                extend(chosen + [p], rest)

        extend([], points)
        return DiagonalCertificate(tuple(best))
