"""
Tests for dense states, permutations and collective unitaries.
"""
from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.dfstates import four_qubit_state, singlet, six_qubit_state
from core.errors import CapacityError, InvalidUnitaryError, ShapeError
from core.noise import haar_su2
from core.statevec import (
    CollectiveUnitary, QubitPermutation, StateVector, apply_collective, apply_independent,
    bitstring_of, embed, fidelity, index_of, inner, permute, tensor, tensor_all,
)


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return StateVector(n, amps / np.linalg.norm(amps))


def permutations_of(n):
    return st.permutations(range(1, n + 1)).map(lambda m: QubitPermutation(n, tuple(m)))


def test_qubit_one_is_most_significant():
    assert index_of("01") == 1
    assert index_of("100") == 4
    assert bitstring_of(5, 4) == "0101"
    assert tensor(StateVector.basis("0"), StateVector.basis("1")).amplitude("01") == 1


def test_tensor_of_three_singlets():
    psi = tensor_all([singlet()] * 3)
    terms = psi.nonzero_terms()
    assert len(terms) == 8
    assert all(abs(abs(a) - 1 / (2 * sqrt(2))) < 1e-15 for _, a in terms)
    assert psi.amplitude("010101").real > 0
    assert psi.amplitude("101010").real < 0
    assert psi.is_normalized()


def test_tensor_capacity():
    with pytest.raises(CapacityError):
        tensor(random_state(6, 0), random_state(5, 1))


def test_state_rejects_bad_sizes():
    with pytest.raises(CapacityError):
        StateVector(11, np.zeros(1 << 11))
    with pytest.raises(ShapeError):
        StateVector(3, np.zeros(7))


def test_amplitudes_are_read_only():
    psi = singlet()
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 1.0


def test_inner_and_fidelity():
    assert abs(inner(singlet(), singlet()) - 1) < 1e-15
    assert inner(four_qubit_state("0"), four_qubit_state("1")) == pytest.approx(0, abs=1e-15)
    assert fidelity(singlet(), singlet().scaled(1j)) == pytest.approx(1.0)
    with pytest.raises(ShapeError):
        inner(singlet(), four_qubit_state("0"))


def test_identity_permutation_is_noop():
    psi = random_state(5, 3)
    assert np.array_equal(permute(QubitPermutation.identity(5), psi).amplitudes, psi.amplitudes)


def test_product_of_transpositions_order():
    p = QubitPermutation.product(6, (2, 4), (1, 3))
    assert p.mapping == (3, 4, 1, 2, 5, 6)
    assert p.apply_to_string("abcdef") == "cdabef"


def test_double_swap_moves_singlet_to_middle_pair():
    moved = permute(QubitPermutation.product(6, (2, 4), (1, 3)), six_qubit_state("011"))
    assert np.array_equal(moved.amplitudes, six_qubit_state("101").amplitudes)


def test_double_swap_moves_singlet_to_last_pair():
    moved = permute(QubitPermutation.product(6, (2, 6), (1, 5)), six_qubit_state("011"))
    assert np.array_equal(moved.amplitudes, six_qubit_state("110").amplitudes)


def test_permute_moves_basis_states():
    p = QubitPermutation(3, (2, 3, 1))
    moved = permute(p, StateVector.basis("100"))
    assert moved.amplitude("010") == 1


def test_block_swap_reorders_tensor_factors():
    a, b = random_state(2, 5), random_state(3, 6)
    # a's qubits 1, 2 go to 4, 5; b's qubits 3, 4, 5 go to 1, 2, 3
    p = QubitPermutation(5, (4, 5, 1, 2, 3))
    assert np.array_equal(permute(p, tensor(a, b)).amplitudes, tensor(b, a).amplitudes)


def test_embed_places_factors():
    psi = embed(4, [(singlet(), (2, 3)), (StateVector.basis("01"), (1, 4))])
    expected = StateVector.from_terms(4, {"0011": 1, "0101": -1}, 1 / sqrt(2))
    assert psi.allclose(expected, atol=1e-15)
    with pytest.raises(ShapeError):
        embed(4, [(singlet(), (1, 2)), (singlet(), (2, 3))])


@settings(max_examples=60, deadline=None)
@given(p=permutations_of(5), q=permutations_of(5), seed=st.integers(0, 2**32 - 1))
def test_composition_law(p, q, seed):
    psi = random_state(5, seed)
    stepwise = permute(p, permute(q, psi))
    assert np.array_equal(stepwise.amplitudes, permute(p @ q, psi).amplitudes)


@settings(max_examples=60, deadline=None)
@given(p=permutations_of(6), seed=st.integers(0, 2**32 - 1))
def test_inverse_round_trip(p, seed):
    psi = random_state(6, seed)
    back = permute(p.inverse(), permute(p, psi))
    assert np.array_equal(back.amplitudes, psi.amplitudes)


@settings(max_examples=40, deadline=None)
@given(p=permutations_of(4), seed=st.integers(0, 2**32 - 1))
def test_collective_noise_commutes_with_permutations(p, seed):
    psi = random_state(4, seed)
    u = haar_su2(seed)
    left = apply_collective(u, permute(p, psi))
    right = permute(p, apply_collective(u, psi))
    assert left.allclose(right, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_collective_unitary_preserves_inner_products(seed):
    a, b = random_state(4, seed), random_state(4, seed + 1)
    u = haar_su2(seed)
    assert abs(inner(apply_collective(u, a), apply_collective(u, b)) - inner(a, b)) < 1e-12


def test_collective_identity_and_z_rotation():
    psi = random_state(3, 9)
    assert np.array_equal(apply_collective(CollectiveUnitary.identity(), psi).amplitudes, psi.amplitudes)
    rotated = apply_collective(CollectiveUnitary.z_rotation(0.3), StateVector.basis("00"))
    assert rotated.amplitude("00") == pytest.approx(np.exp(0.3j))


def test_independent_equal_unitaries_match_collective():
    psi = random_state(4, 11)
    u = haar_su2(2)
    assert apply_independent([u] * 4, psi).allclose(apply_collective(u, psi), atol=1e-15)
    with pytest.raises(ShapeError):
        apply_independent([u] * 3, psi)


def test_collective_unitary_validation():
    with pytest.raises(InvalidUnitaryError):
        CollectiveUnitary(np.array([[1, 1], [0, 1]]))
    with pytest.raises(InvalidUnitaryError):
        CollectiveUnitary(np.eye(3))
    with pytest.raises(InvalidUnitaryError):
        CollectiveUnitary.from_floats([1, 0, 0, 0])


def test_collective_unitary_is_normalized_to_det_one():
    u = CollectiveUnitary(1j * np.eye(2))
    assert np.linalg.det(u.u) == pytest.approx(1.0)
    assert u.unitarity_residual() < 1e-12


def test_permutation_validation():
    with pytest.raises(ShapeError):
        QubitPermutation(3, (1, 1, 2))
    with pytest.raises(ShapeError):
        QubitPermutation.transposition(4, 1, 5)
    with pytest.raises(ShapeError):
        permute(QubitPermutation.identity(3), singlet())
    t = QubitPermutation.transposition(4, 1, 3)
    assert t @ t == QubitPermutation.identity(4)
