"""
Tests for named DF states, the subspace solver and basis completion.
"""
from fractions import Fraction
from itertools import combinations
from math import factorial, sqrt

import numpy as np
import pytest

from core.dfstates import (
    ALL_LABELS, DfBasis, EIGHT_QUBIT_0010_TERMS, EIGHT_QUBIT_LABELS, LogicalEncoding,
    collective_spin, complete_basis, df_dimension, df_residual, df_subspace_basis,
    eight_qubit_state, encode_logical, four_qubit_state, gram_schmidt, named_basis,
    product_states, singlet, six_qubit_state, state_for_label, supersinglet_norm_identity,
    supersinglet_rule,
)
from core.errors import CapacityError, DomainError, PreconditionError, UnknownLabelError
from core.noise import invariance_score
from core.statevec import (
    QubitPermutation, StateVector, fidelity, gram_matrix, inner, permute, tensor,
)

PAIR_KIND = {"00": 0, "01": 1, "10": 1, "11": 2}


def weight_three_strings():
    for ones in combinations(range(6), 3):
        yield "".join("1" if k in ones else "0" for k in range(6))


def complement(bits):
    return "".join("1" if b == "0" else "0" for b in bits)


@pytest.mark.parametrize("n, dim", [(2, 1), (4, 2), (6, 5), (8, 14), (10, 42)])
def test_dimension_formula(n, dim):
    record = df_dimension(n)
    assert record.exact_dim == dim
    assert record.logical_qubits == pytest.approx(np.log2(dim))
    assert record.asymptotic_estimate == pytest.approx(n - 1.5 * np.log2(n))
    assert record.efficiency == pytest.approx(record.logical_qubits / n)


@pytest.mark.parametrize("n", [0, 1, 3, 7, -2])
def test_dimension_rejects_odd_or_small(n):
    with pytest.raises(DomainError):
        df_dimension(n)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_solver_matches_formula(n):
    basis = df_subspace_basis(n)
    assert len(basis) == df_dimension(n).exact_dim
    assert basis.gram_residual() < 1e-12
    assert basis.df_residual() < 1e-10


def test_solver_limits():
    with pytest.raises(CapacityError):
        df_subspace_basis(10)
    with pytest.raises(DomainError):
        df_subspace_basis(5)


def test_two_qubit_subspace_is_the_singlet():
    assert fidelity(df_subspace_basis(2).states[0], singlet()) == pytest.approx(1.0, abs=1e-12)


def test_singlet_and_four_qubit_amplitudes():
    s = 1 / sqrt(2)
    assert singlet().amplitude("01") == pytest.approx(s)
    assert singlet().amplitude("10") == pytest.approx(-s)
    one = four_qubit_state("1")
    c = 1 / (2 * sqrt(3))
    expected = {"0011": 2, "0101": -1, "0110": -1, "1001": -1, "1010": -1, "1100": 2}
    for bits, coeff in expected.items():
        assert one.amplitude(bits) == pytest.approx(coeff * c)
    assert len(one.nonzero_terms()) == 6
    assert abs(inner(four_qubit_state("0"), one)) < 1e-15


def test_collective_spin_annihilates_singlet_but_not_basis_state():
    assert collective_spin(singlet(), "z").norm() < 1e-15
    assert df_residual(StateVector.basis("01")) > 0.5


def test_six_qubit_product_states_are_permutations():
    swap = QubitPermutation.product(6, (2, 4), (1, 3))
    assert np.array_equal(permute(swap, six_qubit_state("011")).amplitudes,
                          six_qubit_state("101").amplitudes)
    expected = tensor(singlet(), tensor(singlet(), singlet()))
    assert six_qubit_state("000").allclose(expected, atol=1e-15)


def test_genuine_six_qubit_state_amplitudes():
    psi = six_qubit_state("111")
    magnitude = 1 / (2 * sqrt(3))
    terms = psi.nonzero_terms(1e-10)
    assert len(terms) == 12
    assert all(abs(abs(a) - magnitude) < 1e-12 for _, a in terms)
    assert all(abs(a.imag) < 1e-12 for _, a in terms)
    assert psi.amplitude("000111").real > 0


def test_genuine_six_qubit_state_sign_rule():
    psi = six_qubit_state("111")
    magnitude = 1 / (2 * sqrt(3))
    for bits in weight_three_strings():
        kinds = [PAIR_KIND[bits[k:k + 2]] for k in (0, 2, 4)]
        if sorted(kinds) == [0, 1, 2]:
            inversions = sum(kinds[i] > kinds[j] for i, j in combinations(range(3), 2))
            expected = (-1) ** inversions * magnitude
        else:
            expected = 0.0
        assert abs(psi.amplitude(bits) - expected) < 1e-12, bits


def test_genuine_six_qubit_state_vanishes_on_anticorrelated_pairs():
    psi = six_qubit_state("111")
    for bits in ("010101", "101010", "011010", "100101"):
        assert abs(psi.amplitude(bits)) < 1e-12


def test_genuine_six_qubit_state_is_antisymmetric_under_pair_exchange():
    psi = six_qubit_state("111")
    swap_first_pairs = QubitPermutation.product(6, (1, 3), (2, 4))
    assert permute(swap_first_pairs, psi).allclose(psi.scaled(-1), atol=1e-12)


def test_six_qubit_basis(six_basis):
    states = list(six_basis.values())
    gram = gram_matrix(states)
    assert np.max(np.abs(gram - np.eye(5))) < 1e-12
    assert max(df_residual(s) for s in states) < 1e-10


def test_eight_qubit_basis(eight_basis):
    basis = DfBasis(8, tuple(eight_basis.values()), EIGHT_QUBIT_LABELS)
    assert len(basis) == 14
    assert basis.gram_residual() < 1e-12
    assert basis.df_residual() < 1e-10


def test_eight_qubit_named_amplitudes():
    assert eight_qubit_state("0001").amplitude("00001111") == pytest.approx(1 / sqrt(5))
    assert eight_qubit_state("0001").amplitude("11110000") == pytest.approx(1 / sqrt(5))
    other = eight_qubit_state("0010")
    assert other.amplitude("00110011") == pytest.approx(-1 / (2 * sqrt(3)))
    assert other.amplitude("00010111") == pytest.approx(1 / (4 * sqrt(3)))
    assert len(other.nonzero_terms()) == 36
    assert sum(c * c for c in EIGHT_QUBIT_0010_TERMS.values()) == 48


def test_supersinglet_rule_reproduces_four_qubit_state():
    assert supersinglet_rule(2).build().allclose(four_qubit_state("1"), atol=1e-15)


@pytest.mark.parametrize("half", [2, 4])
def test_supersinglet_norm(half):
    rule = supersinglet_rule(half)
    assert rule.norm_squared() == Fraction((half + 1) * factorial(half) ** 2)
    assert supersinglet_norm_identity(half) == (half + 1) * factorial(half) ** 2
    assert rule.build().is_normalized()
    assert len(rule.arrangements()) == factorial(2 * half) // factorial(half) ** 2


def test_supersinglet_rule_domain():
    with pytest.raises(DomainError):
        supersinglet_rule(3)


def test_gram_schmidt_on_swapped_double_singlet():
    double = four_qubit_state("0")
    swapped = permute(QubitPermutation.transposition(4, 2, 3), double)
    out = gram_schmidt([double, swapped])
    assert len(out) == 2
    assert fidelity(out[1], four_qubit_state("1")) == pytest.approx(1.0, abs=1e-12)


def test_gram_schmidt_drops_dependent_vectors():
    out = gram_schmidt([singlet(), singlet().scaled(2j)])
    assert len(out) == 1


@pytest.mark.parametrize("n, expected", [(4, 1), (6, 1), (8, 2)])
def test_completion_counts(n, expected):
    existing = product_states(n)
    completion = complete_basis(existing, n)
    assert len(completion) == expected
    for psi in completion:
        assert df_residual(psi) < 1e-10
        assert max(abs(inner(e, psi)) for e in existing) < 1e-10
    assert np.max(np.abs(gram_matrix(completion) - np.eye(expected))) < 1e-10


def test_six_qubit_completion_is_the_genuine_state():
    completion = complete_basis(product_states(6), 6)
    assert fidelity(completion[0], six_qubit_state("111")) >= 1 - 1e-10


def test_eight_qubit_completion_with_supersinglet():
    existing = product_states(8) + [eight_qubit_state("0001")]
    completion = complete_basis(existing, 8)
    assert len(completion) == 1
    assert fidelity(completion[0], eight_qubit_state("0010")) >= 1 - 1e-10


def test_completion_preconditions():
    with pytest.raises(PreconditionError):
        complete_basis([StateVector.basis("0101")], 4)
    with pytest.raises(PreconditionError):
        complete_basis([four_qubit_state("0"), four_qubit_state("0")], 4)
    with pytest.raises(PreconditionError):
        complete_basis([singlet()], 4)


@pytest.mark.parametrize("label", ALL_LABELS)
def test_named_states_are_normalized_and_invariant(label):
    psi = state_for_label(label)
    assert psi.is_normalized()
    assert invariance_score(psi, 100, 7) >= 1 - 1e-10


@pytest.mark.parametrize("label", ALL_LABELS)
def test_bit_flip_parity(label):
    psi = state_for_label(label)
    sign = (-1) ** (psi.n_qubits // 2)
    for bits, amp in psi.nonzero_terms(1e-10):
        assert abs(psi.amplitude(complement(bits)) - sign * amp) < 1e-12


def test_named_basis_lookup():
    basis = named_basis(6)
    assert basis.labels == ("000", "011", "101", "110", "111")
    assert basis.state("111") is six_qubit_state("111")
    with pytest.raises(UnknownLabelError):
        basis.state("222")
    with pytest.raises(DomainError):
        named_basis(5)


def test_unknown_label_lists_valid_ones():
    with pytest.raises(UnknownLabelError) as info:
        state_for_label("2")
    assert "011" in str(info.value)
    assert info.value.valid == list(ALL_LABELS)


def test_logical_encoding():
    assert encode_logical(LogicalEncoding(0.0, 0.0)).allclose(six_qubit_state("011"), atol=1e-15)
    assert encode_logical(LogicalEncoding(np.pi / 2, 0.0)).allclose(six_qubit_state("101"), atol=1e-15)
    psi = encode_logical(LogicalEncoding(np.pi / 4, np.pi / 3))
    assert psi.is_normalized()
    assert invariance_score(psi, 50, 1) >= 1 - 1e-10
