"""
Exact scalars and permutations.

Scalars are `fractions.Fraction` values: always in lowest terms with a
positive denominator, zero normalised to 0/1. Permutations use 1-based
one-line notation, as every index in this package does.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

from rotabasis.exceptions import InputValidationError

Scalar = Fraction

_SCALAR_PATTERN = re.compile(r"^-?\d+(/\d+)?$")


def parse_scalar(value: Union[int, str, Fraction]) -> Fraction:
    """
    Parse a rational from a JSON value: an integer, a decimal-integer string
    or a "p/q" string. Floats are rejected, there is no exact reading of them.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputValidationError(f"Not an exact rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)

    text = value.strip()
    if not _SCALAR_PATTERN.match(text):
        raise InputValidationError(f"Malformed rational string: {value!r}")
    if "/" in text and int(text.split("/")[1]) == 0:
        raise InputValidationError(f"Zero denominator: {value!r}")
    return Fraction(text)


def format_scalar(value: Fraction) -> str:
    # str(Fraction) already yields "p/q" or a bare integer
    return str(Fraction(value))


def count_inversions(seq: Sequence[int]) -> int:
    return sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])


@dataclass(frozen=True)
class Permutation:
    """A bijection of [m] in one-line notation (p(1), ..., p(m))."""

    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if any(isinstance(x, bool) or not isinstance(x, int) for x in images):
            raise InputValidationError(f"Permutation entries must be integers: {images}")
        if sorted(images) != list(range(1, len(images) + 1)):
            raise InputValidationError(f"Not a permutation of [{len(images)}]: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def of(cls, values: Iterable[int]) -> "Permutation":
        return cls(tuple(values))

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """(self ∘ other)(i) = self(other(i))."""
        if len(self) != len(other):
            raise InputValidationError("Permutations must have the same degree")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, p in enumerate(self.images, start=1):
            inv[p - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.images, start=1))

    def sign(self) -> int:
        return -1 if count_inversions(self.images) % 2 else 1

    def one_line(self) -> list:
        return list(self.images)


def perm_sign(p: Union[Permutation, Sequence[int]]) -> int:
    """(-1)^{inversions(p)}; raises InputValidationError on malformed input."""
    if not isinstance(p, Permutation):
        p = Permutation(tuple(p))
    return p.sign()
