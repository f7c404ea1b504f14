"""
Latin squares and the Alon-Tarsi difference.

A Latin square L of order n is read as the term of P_{n,(id,...,id)}(E_n)
with J_k(i) = L[i][k]: its sign is the product of the signs of all rows and
all columns. With that convention the signed count equals the invariant
exactly, not just up to sign.
"""

from dataclasses import dataclass
from itertools import permutations
from math import prod
from typing import List, Optional, Sequence

from loguru import logger

from rotabasis import config
from rotabasis.exceptions import InputValidationError, ResourceGuardError
from rotabasis.models.scalars import perm_sign


def is_latin_square(grid: Sequence[Sequence[int]]) -> bool:
    n = len(grid)
    symbols = set(range(1, n + 1))
    if any(len(row) != n or set(row) != symbols for row in grid):
        return False
    return all({grid[i][j] for i in range(n)} == symbols for j in range(n))


def latin_square_sign(grid: Sequence[Sequence[int]]) -> int:
    n = len(grid)
    rows = prod(perm_sign(row) for row in grid)
    cols = prod(perm_sign([grid[i][j] for i in range(n)]) for j in range(n))
    return rows * cols


@dataclass(frozen=True)
class LatinSquareTally:
    n: int
    total: int
    even: int
    odd: int

    @property
    def difference(self) -> int:
        return self.even - self.odd


class LatinSquareCounter:
    def __init__(self, max_n: Optional[int] = None):
        self.max_n = config.ATDIFF_MAX_N if max_n is None else max_n

    def tally(self, n: int) -> LatinSquareTally:
        if n < 1:
            raise InputValidationError("Latin squares need n >= 1")
        if n > self.max_n:
            raise ResourceGuardError(f"Enumerating Latin squares of order {n} exceeds the guard n <= {self.max_n}")

        rows = [(p, perm_sign(p)) for p in permutations(range(1, n + 1))]
        columns: List[List[int]] = [[] for _ in range(n)]
        used = [0] * n
        even = odd = 0

        def fill(depth: int, row_sign: int) -> None:
            nonlocal even, odd
            if depth == n:
                sign = row_sign * prod(perm_sign(col) for col in columns)
                if sign > 0:
                    even += 1
                else:
                    odd += 1
                return
            for row, s in rows:
                if any(used[j] >> row[j] & 1 for j in range(n)):
                    continue
                for j in range(n):
                    used[j] |= 1 << row[j]
                    columns[j].append(row[j])
                fill(depth + 1, row_sign * s)
                for j in range(n):
                    used[j] &= ~(1 << row[j])
                    columns[j].pop()

        fill(0, 1)
        tally = LatinSquareTally(n, even + odd, even, odd)
        logger.debug("Latin squares of order {}: {}", n, tally)
        return tally

    def alon_tarsi_difference(self, n: int) -> int:
        return self.tally(n).difference

