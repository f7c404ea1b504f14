from fractions import Fraction
from itertools import permutations, product

import pytest
from hypothesis import given

from rotabasis.exceptions import InputValidationError, PreconditionError
from rotabasis.models.tensors import DenseTensor, SparseTensor
from rotabasis.services.linear_algebra import matrix_rank
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
from rotabasis.services.tensor_algebra import as_matrix_rows, levi_civita_tensor, tensor_power
from tests.strategies import dense_tensors


@pytest.fixture
def analyzer():
    return SliceRankAnalyzer(exact_diagonal_limit=20, node_cap=1_000_000)


def test_trivial_decomposition_of_e2(analyzer, e2):
    dec = analyzer.trivial_decomposition(e2)
    assert len(dec) == 2
    first, second = dec.terms
    assert first.axis == second.axis == 1
    assert first.vector == (1, 0) and first.residual.array.tolist() == [0, 1]
    assert second.vector == (0, 1) and second.residual.array.tolist() == [-1, 0]
    assert analyzer.verify_slice_decomposition(e2, dec)


def test_trivial_decomposition_of_e3_has_matrix_residuals(analyzer, e3):
    dec = analyzer.trivial_decomposition(e3)
    assert len(dec) == 3
    assert all(t.residual.order == 2 and t.residual.dim == 3 for t in dec.terms)
    assert analyzer.verify_slice_decomposition(e3, dec)


def test_single_entry_tensor_needs_one_term(analyzer):
    x = SparseTensor(3, 3, {(2, 1, 3): 5})
    assert len(analyzer.trivial_decomposition(x)) == 1


def test_zero_tensor_has_empty_decomposition(analyzer):
    zero = DenseTensor.zeros(2, 3)
    assert len(analyzer.trivial_decomposition(zero)) == 0
    assert analyzer.verify_slice_decomposition(zero, SliceDecomposition(()))


@given(dense_tensors(3, 2))
def test_trivial_decomposition_always_verifies(x):
    analyzer = SliceRankAnalyzer()
    for axis in (1, 2, 3):
        dec = analyzer.trivial_decomposition(x, axis)
        assert len(dec) <= x.dim
        assert analyzer.verify_slice_decomposition(x, dec)


def test_verify_rejects_wrong_decompositions(analyzer, e2, e3):
    assert not analyzer.verify_slice_decomposition(e2, SliceDecomposition(()))
    terms = list(analyzer.trivial_decomposition(e3).terms)
    perturbed = terms[0]
    terms[0] = SliceTerm(perturbed.axis, (Fraction(2),) + perturbed.vector[1:], perturbed.residual)
    assert not analyzer.verify_slice_decomposition(e3, SliceDecomposition(tuple(terms)))


def test_verify_rejects_bad_axis(analyzer, e2):
    term = SliceTerm(3, (Fraction(1), Fraction(0)), DenseTensor([0, 1]))
    with pytest.raises(InputValidationError):
        analyzer.verify_slice_decomposition(e2, SliceDecomposition((term,)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_levi_civita_support_is_an_antichain(n):
    assert is_antichain(levi_civita_tensor(n).support_indices(), TotalOrders.natural(n, n))


def test_antichain_check_is_order_sensitive():
    chain = [(1, 1), (2, 2)]
    natural = TotalOrders.natural(2, 2)
    assert not is_antichain(chain, natural)
    assert is_antichain(chain, natural.with_reversed(2))


def test_power_support_is_an_antichain_under_lexicographic_orders():
    orders = TotalOrders.lexicographic(TotalOrders.natural(2, 2), 2)
    assert is_antichain(tensor_power(levi_civita_tensor(2), 2).support_indices(), orders)


def test_slice_rank_of_e3_is_three(analyzer, e3):
    value, partition = analyzer.antichain_slice_rank(e3)
    assert value == 3
    assert partition.cost(3) == 3
    assert sorted(idx for idx, _ in partition.labels) == sorted(e3.support_indices())


@pytest.mark.parametrize("n, k", [(2, 1), (2, 2), (3, 1), (2, 3)])
def test_levi_civita_powers_have_full_slice_rank(analyzer, n, k):
    power = tensor_power(levi_civita_tensor(n), k)
    orders = TotalOrders.lexicographic(TotalOrders.natural(n, n), k)
    value, partition = analyzer.antichain_slice_rank(power, orders)
    assert value == n ** k
    assert partition.cost(n) == value


def test_certificates_settle_the_square_of_e3(analyzer):
    power = tensor_power(levi_civita_tensor(3), 2)
    cert = diagonal_certificate_for_power(3, 2)
    assert cert.bound == 9
    assert cert.inside_support(power)
    assert len(analyzer.trivial_decomposition(power)) == 9


def test_single_point_support_has_slice_rank_one(analyzer):
    x = SparseTensor(3, 2, {(1, 2, 2): 7})
    assert analyzer.antichain_slice_rank(x)[0] == 1


def test_non_antichain_support_is_rejected(analyzer):
    x = SparseTensor(2, 2, {(1, 1): 1, (2, 2): 1})
    with pytest.raises(PreconditionError):
        analyzer.antichain_slice_rank(x)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_slice_rank_matches_matrix_rank_for_permutation_matrices(analyzer, n):
    for p in permutations(range(1, n + 1)):
        x = SparseTensor(2, n, {(i, p[i - 1]): 1 for i in range(1, n + 1)})
        orders = TotalOrders.natural(2, n).with_reversed(2)
        if not is_antichain(x.support_indices(), orders):
            continue
        assert analyzer.antichain_slice_rank(x, orders)[0] == matrix_rank(as_matrix_rows(x)) == n


def test_labelling_is_lexicographically_least(analyzer, e2):
    _, partition = analyzer.antichain_slice_rank(e2)
    assert partition.labels == (((1, 2), 1), ((2, 1), 1))


def test_cyclic_shift():
    assert cyclic_shift((1, 2), 3) == (2, 3)
    assert cyclic_shift((3, 3), 3) == (1, 1)
    for index in product(range(1, 4), repeat=2):
        shifted = index
        for _ in range(3):
            shifted = cyclic_shift(shifted, 3)
        assert shifted == index


def test_diagonal_certificate_for_power():
    assert diagonal_certificate_for_power(2, 1).points == ((1, 2), (2, 1))
    assert diagonal_certificate_for_power(2, 2).bound == 4
    cert = diagonal_certificate_for_power(3, 2)
    assert cert.bound == 9
    assert cert.inside_support(tensor_power(levi_civita_tensor(3), 2))


def test_certificate_rejects_points_sharing_a_coordinate():
    with pytest.raises(InputValidationError):
        DiagonalCertificate(((1, 2), (1, 3)))


def test_diagonal_lower_bound(analyzer, e2, e3):
    assert analyzer.diagonal_lower_bound(e2).bound == 2
    assert analyzer.diagonal_lower_bound(SparseTensor(2, 3, {(2, 2): 1})).bound == 1
    assert analyzer.diagonal_lower_bound(e3).bound == 3


@pytest.mark.parametrize("n, k", [(2, 1), (2, 2), (3, 1), (2, 3)])
def test_bounds_sandwich_the_slice_rank(analyzer, n, k):
    power = tensor_power(levi_civita_tensor(n), k)
    orders = TotalOrders.lexicographic(TotalOrders.natural(n, n), k)
    lower = analyzer.diagonal_lower_bound(power).bound
    value, _ = analyzer.antichain_slice_rank(power, orders)
    assert lower <= value <= power.dim


def test_instability_witness_for_rank_one_matrix(analyzer):
    x = SparseTensor(2, 2, {(1, 1): 1, (1, 2): 2, (2, 1): 3, (2, 2): 6})
    witness = analyzer.instability_witness(x)
    assert witness is not None and len(witness) == 1
    assert analyzer.verify_slice_decomposition(x, witness)


def test_instability_witness_from_an_empty_slice(analyzer):
    x = SparseTensor(3, 3, {(1, 1, 1): 1, (2, 3, 1): 1, (3, 2, 1): 4})
    witness = analyzer.instability_witness(x)
    assert witness is not None and len(witness) < 3
    assert analyzer.verify_slice_decomposition(x, witness)


def test_no_instability_witness_for_levi_civita(analyzer, e2, e3):
    assert analyzer.instability_witness(e2) is None
    assert analyzer.instability_witness(e3) is None
