"""
Desk-scale checks of the headline results: slice-rank fullness, invariant
values, relative invariance, the determinantal identities, the Latin-square
cross-check, basis arrangements and semistability certificates.

Usage:
    python -m rotabasis.scripts.desk_checks [--repetitions N] [--seed S]
"""

import argparse
import random
import sys
import time
from fractions import Fraction
from itertools import product
from typing import Callable, List, Tuple

from loguru import logger

from rotabasis.models.tensors import SparseTensor, SquareMatrix
from rotabasis.services.determinantal import (
    BasisSequence,
    check_change_of_basis_rule,
    check_transpose_action,
    determinantal_tensor,
)
from rotabasis.services.invariants import InvariantEvaluator, PermTuple, degree_bound
from rotabasis.services.latin_squares import LatinSquareCounter, is_latin_square
from rotabasis.services.linear_algebra import determinant
from rotabasis.services.rota_solver import RotaSolver, verify_arrangement
from rotabasis.services.semistability import SemistabilitySearcher
from rotabasis.services.slice_rank import (
    SliceRankAnalyzer,
    TotalOrders,
    diagonal_certificate_for_power,
)
from rotabasis.services.tensor_algebra import levi_civita_tensor, tensor_power


def random_invertible(rng: random.Random, n: int) -> SquareMatrix:
    while True:
        m = SquareMatrix([[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)])
        if determinant(m) != 0:
            return m


def check_slice_rank_fullness(rng: random.Random, reps: int) -> bool:
    analyzer = SliceRankAnalyzer()
    for n, k in [(2, 1), (2, 2), (2, 3), (3, 1)]:
        power = tensor_power(levi_civita_tensor(n), k)
        orders = TotalOrders.lexicographic(TotalOrders.natural(n, n), k)
        value, _ = analyzer.antichain_slice_rank(power, orders)
        print(f"   slice-rank(E_{n}^{k}) = {value}")
        if value != n ** k:
            return False
    cert = diagonal_certificate_for_power(3, 2)
    power = tensor_power(levi_civita_tensor(3), 2)
    upper = len(analyzer.trivial_decomposition(power))
    print(f"   E_3^2: diagonal lower bound {cert.bound}, trivial upper bound {upper}")
    return cert.bound == 9 and upper == 9 and cert.inside_support(power)


def check_e3_slice_rank(rng: random.Random, reps: int) -> bool:
    value, _ = SliceRankAnalyzer().antichain_slice_rank(levi_civita_tensor(3))
    return value == 3


def check_invariant_values(rng: random.Random, reps: int) -> bool:
    evaluator = InvariantEvaluator(threads=1)
    e2, e3 = levi_civita_tensor(2), levi_civita_tensor(3)
    pruned2 = evaluator.evaluate(e2, 2, PermTuple.identity(2, 2))
    naive2 = evaluator.naive(e2, 2, PermTuple.identity(2, 2))
    pruned3 = evaluator.evaluate(e3, 3, PermTuple.identity(3, 3))
    naive3 = evaluator.naive(e3, 3, PermTuple.identity(3, 3))
    print(f"   P_2(E_2) = {pruned2} (naive {naive2}), P_3(E_3) = {pruned3} (naive {naive3})")
    return pruned2 == naive2 == 2 and pruned3 == naive3 == 0


def check_relative_invariance(rng: random.Random, reps: int) -> bool:
    evaluator = InvariantEvaluator(threads=1)
    for d in (2, 3):
        for _ in range(reps):
            x = SparseTensor.from_items(
                d, 2, [((i,) + rest, rng.randint(-3, 3)) for i in (1, 2) for rest in _tuples(d - 1, 2)]
            )
            mats = [random_invertible(rng, 2) for _ in range(d)]
            if not evaluator.check_relative_invariance(x, mats, 2, PermTuple.identity(d, 2)):
                return False
    return True


def _tuples(length: int, n: int) -> List[Tuple[int, ...]]:
    return list(product(range(1, n + 1), repeat=length))


def check_determinantal(rng: random.Random, reps: int) -> bool:
    for n in range(1, 5):
        if determinantal_tensor(BasisSequence([SquareMatrix.identity(n)] * n)) != levi_civita_tensor(n):
            return False
    for n in (2, 3):
        for _ in range(reps):
            a = [random_invertible(rng, n) for _ in range(n)]
            b = [random_invertible(rng, n) for _ in range(n)]
            if not check_change_of_basis_rule(a, b) or not check_transpose_action(BasisSequence(b)):
                return False
    return True


def check_alon_tarsi(rng: random.Random, reps: int) -> bool:
    counter = LatinSquareCounter()
    evaluator = InvariantEvaluator()
    for n in range(1, 5):
        difference = counter.alon_tarsi_difference(n)
        invariant = evaluator.evaluate(levi_civita_tensor(n), n, PermTuple.identity(n, n))
        print(f"   n={n}: Latin squares {difference}, invariant {invariant}")
        if abs(difference) != abs(invariant):
            return False
    return counter.alon_tarsi_difference(2) == 2 and counter.alon_tarsi_difference(3) == 0


def check_rota_round_trip(rng: random.Random, reps: int) -> bool:
    solver = RotaSolver()
    for n in (2, 3, 4):
        for _ in range(reps):
            bases = BasisSequence([random_invertible(rng, n) for _ in range(n)])
            outcome = solver.solve(bases, "direct", max_ell=1)
            if not outcome.found or not verify_arrangement(bases, outcome.arrangement):
                return False
        identity = BasisSequence([SquareMatrix.identity(n)] * n)
        outcome = solver.solve(identity, "direct", max_ell=1)
        if not outcome.found or not is_latin_square(outcome.arrangement.grid):
            return False
    return True


def check_semistability(rng: random.Random, reps: int) -> bool:
    searcher = SemistabilitySearcher(threads=1)
    found = searcher.search(levi_civita_tensor(2), 2)
    if found.certificate is None or found.certificate.M != 2 or abs(found.certificate.value) != 2:
        return False
    rank_one = SparseTensor(2, 2, {(1, 1): 1, (1, 2): 2, (2, 1): 3, (2, 2): 6})
    missing = searcher.search(rank_one, 4)
    print(f"   E_2 certified at M=2; rank-one tensor: {missing.status}")
    return missing.certificate is None and degree_bound(3, 2).bound == 157464


# (title, check, random instances per case)
CHECKS: List[Tuple[str, Callable[[random.Random, int], bool], int]] = [
    ("Slice-rank fullness of Levi-Civita powers", check_slice_rank_fullness, 1),
    ("Slice rank of E_3", check_e3_slice_rank, 1),
    ("Invariant values, pruned and naive", check_invariant_values, 1),
    ("Relative GL-invariance", check_relative_invariance, 100),
    ("Determinantal tensor identities", check_determinantal, 100),
    ("Latin squares against the invariant", check_alon_tarsi, 1),
    ("Basis arrangements round trip", check_rota_round_trip, 50),
    ("Semistability certificates", check_semistability, 1),
]


def main() -> int:
    parser = argparse.ArgumentParser(description="Run the desk-scale checks")
    parser.add_argument("--repetitions", type=int, help="random instances per case (default: the acceptance counts)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    logger.remove()
    logger.add(sys.stderr, level="WARNING")

    all_passed = True
    for title, check, reps in CHECKS:
        print(f"\n🔎 {title}...")
        start = time.perf_counter()
        try:
            passed = check(random.Random(args.seed), args.repetitions or reps)
        except Exception as e:
            print(f"   ❌ Raised {type(e).__name__}: {e}")
            passed = False
        elapsed = time.perf_counter() - start
        print(f"   {'✅ Passed' if passed else '❌ Failed'} ({elapsed:.2f}s)")
        all_passed = all_passed and passed

    print("\n" + ("🎉 All checks passed" if all_passed else "⚠️  Some checks failed"))
    return 0 if all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
