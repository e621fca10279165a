"""
Decoherence-free states: named constructors, the DF subspace solver,
the dimension formula and Gram-Schmidt basis completion.

A state is DF when every collective unitary U^(x)n leaves it unchanged,
equivalently when the collective spin operators J_x, J_y, J_z all
annihilate it.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, partial
from itertools import combinations
from math import comb, factorial, log2, sqrt
from typing import Callable, Dict, List, Sequence, Tuple, Union
import logging

import numpy as np
import scipy.linalg

from core.errors import CapacityError, DomainError, PreconditionError, UnknownLabelError
from core.statevec import (
    DEFAULT_TOL, PAULI, QubitPermutation, StateVector, apply_local_gates,
    embed, gram_matrix, permute, tensor,
)

logger = logging.getLogger(__name__)

SOLVER_MAX_QUBITS = 8
SINGULAR_TOL = 1e-10
DROP_TOL = 1e-8

SINGLET_LABELS = ("s",)
FOUR_QUBIT_LABELS = ("0", "1")
SIX_QUBIT_LABELS = ("000", "011", "101", "110", "111")
EIGHT_QUBIT_LABELS = (
    "0000", "0011", "0101", "0110", "1001", "1010", "1100", "1111",
    "0111", "1011", "1101", "1110", "0001", "0010",
)

# Factor states placed on qubit positions; "s" singlet, "1" the 4-qubit
# supersinglet, "111" the genuine 6-qubit state.
SIX_QUBIT_LAYOUT = {
    "000": (("s", (1, 2)), ("s", (3, 4)), ("s", (5, 6))),
    "011": (("s", (1, 2)), ("1", (3, 4, 5, 6))),
    "101": (("s", (3, 4)), ("1", (1, 2, 5, 6))),
    "110": (("s", (5, 6)), ("1", (1, 2, 3, 4))),
}
EIGHT_QUBIT_LAYOUT = {
    "0000": (("s", (1, 2)), ("s", (3, 4)), ("s", (5, 6)), ("s", (7, 8))),
    "0011": (("s", (1, 2)), ("s", (3, 4)), ("1", (5, 6, 7, 8))),
    "0101": (("s", (1, 2)), ("s", (5, 6)), ("1", (3, 4, 7, 8))),
    "0110": (("s", (1, 2)), ("s", (7, 8)), ("1", (3, 4, 5, 6))),
    "1001": (("s", (3, 4)), ("s", (5, 6)), ("1", (1, 2, 7, 8))),
    "1010": (("s", (3, 4)), ("s", (7, 8)), ("1", (1, 2, 5, 6))),
    "1100": (("s", (5, 6)), ("s", (7, 8)), ("1", (1, 2, 3, 4))),
    "1111": (("1", (1, 2, 3, 4)), ("1", (5, 6, 7, 8))),
    "0111": (("s", (1, 2)), ("111", (3, 4, 5, 6, 7, 8))),
    "1011": (("s", (3, 4)), ("111", (1, 2, 5, 6, 7, 8))),
    "1101": (("s", (5, 6)), ("111", (1, 2, 3, 4, 7, 8))),
    "1110": (("s", (7, 8)), ("111", (1, 2, 3, 4, 5, 6))),
}

FOUR_QUBIT_ONE_TERMS = {
    "0011": 2, "0101": -1, "0110": -1, "1001": -1, "1010": -1, "1100": 2,
}

# The 8-qubit state completing the basis, normalizer 1/(4 sqrt 3)
EIGHT_QUBIT_0010_TERMS = {
    "00010111": 1, "00011011": 1, "00011101": -1, "00011110": -1,
    "00100111": 1, "00101011": 1, "00101101": -1, "00101110": -1,
    "00110011": -2, "00111100": 2, "01000111": -1, "01001011": -1,
    "01001101": 1, "01001110": 1, "01110001": 1, "01110010": 1,
    "01110100": -1, "01111000": -1, "10000111": -1, "10001011": -1,
    "10001101": 1, "10001110": 1, "10110001": 1, "10110010": 1,
    "10110100": -1, "10111000": -1, "11000011": 2, "11001100": -2,
    "11010001": -1, "11010010": -1, "11010100": 1, "11011000": 1,
    "11100001": -1, "11100010": -1, "11100100": 1, "11101000": 1,
}


@dataclass(frozen=True)
class DimensionRecord:
    """Size of the N-qubit DF subspace and how many logical qubits it holds."""
    n_qubits: int
    exact_dim: int
    logical_qubits: float
    asymptotic_estimate: float
    efficiency: float


@dataclass(frozen=True, eq=False)
class DfBasis:
    """Ordered, labelled orthonormal basis of (part of) a DF subspace."""
    n_qubits: int
    states: Tuple[StateVector, ...]
    labels: Tuple[str, ...]

    def __len__(self):
        return len(self.states)

    def state(self, label: str) -> StateVector:
        try:
            return self.states[self.labels.index(label)]
        except ValueError:
            raise UnknownLabelError(label, self.labels)

    def gram_residual(self) -> float:
        """max |G - I| over the Gram matrix."""
        gram = gram_matrix(self.states)
        return float(np.max(np.abs(gram - np.eye(len(self.states)))))

    def df_residual(self) -> float:
        return max(df_residual(s) for s in self.states)


@dataclass(frozen=True, eq=False)
class CoefficientRule:
    """
    Coefficients over the distinct rearrangements of a canonical word.

    Args:
        word: Canonical bitstring, e.g. "00001111"
        weight_fn: Signed rational coefficient of each rearrangement
        normalizer: Common positive factor making the state unit norm
    """
    word: str
    weight_fn: Callable[[str], Union[int, Fraction]]
    normalizer: float

    def arrangements(self) -> List[str]:
        """Distinct rearrangements of word, in bitstring order."""
        n, ones = len(self.word), self.word.count("1")
        strings = []
        for positions in combinations(range(n), ones):
            bits = ["0"] * n
            for p in positions:
                bits[p] = "1"
            strings.append("".join(bits))
        return sorted(strings)

    def coefficients(self) -> Dict[str, Union[int, Fraction]]:
        return {s: self.weight_fn(s) for s in self.arrangements()}

    def norm_squared(self) -> Fraction:
        """Exact squared norm before the normalizer is applied."""
        return sum((Fraction(c) ** 2 for c in self.coefficients().values()), Fraction(0))

    def build(self) -> StateVector:
        terms = {s: float(c) for s, c in self.coefficients().items()}
        return StateVector.from_terms(len(self.word), terms, self.normalizer)


def _supersinglet_weight(half: int, bits: str) -> int:
    z = bits[:half].count("0")
    return factorial(z) * factorial(half - z) * (-1) ** (half - z)


def supersinglet_rule(half: int) -> CoefficientRule:
    """
    The N = 2*half supersinglet: coefficient z!(half-z)!(-1)^(half-z), z the
    number of zeros among the first half positions.

    Raises:
        DomainError: For half other than 2 or 4
    """
    if half not in (2, 4):
        raise DomainError(f"Supersinglet rule offered for 4 and 8 qubits, not {2 * half}")
    return CoefficientRule(
        word="0" * half + "1" * half,
        weight_fn=partial(_supersinglet_weight, half),
        normalizer=1.0 / (factorial(half) * sqrt(half + 1)),
    )


def supersinglet_norm_identity(half: int) -> int:
    """sum_z C(half, z)^2 (z!(half-z)!)^2, which equals (half+1)(half!)^2."""
    return sum(comb(half, z) ** 2 * (factorial(z) * factorial(half - z)) ** 2
               for z in range(half + 1))


def df_dimension(n: int) -> DimensionRecord:
    """
    Dimension of the N-qubit DF subspace, N!/((N/2)!(N/2+1)!).

    Raises:
        DomainError: If n is odd or not positive
    """
    if n < 2 or n % 2:
        raise DomainError(f"DF dimension needs an even qubit count >= 2, got {n}")
    half = n // 2
    exact = factorial(n) // (factorial(half) * factorial(half + 1))
    logical = log2(exact)
    return DimensionRecord(
        n_qubits=n,
        exact_dim=exact,
        logical_qubits=logical,
        asymptotic_estimate=n - 1.5 * log2(n),
        efficiency=logical / n,
    )


def collective_spin(psi: StateVector, axis: str) -> StateVector:
    """J_a |psi> with J_a = 1/2 sum_i sigma_a^(i), a in {x, y, z}."""
    sigma = PAULI[axis]
    total = np.zeros_like(psi.amplitudes)
    for qubit in range(psi.n_qubits):
        gates = [None] * psi.n_qubits
        gates[qubit] = sigma
        total = total + apply_local_gates(gates, psi).amplitudes
    return StateVector(psi.n_qubits, 0.5 * total)


def df_residual(psi: StateVector) -> float:
    """max over a of ||J_a psi||; zero for DF states."""
    return max(collective_spin(psi, axis).norm() for axis in "xyz")


def collective_spin_matrix(n: int, axis: str) -> np.ndarray:
    sigma = PAULI[axis]
    matrix = np.zeros((1 << n, 1 << n), dtype=np.complex128)
    for qubit in range(n):
        left = np.eye(1 << qubit)
        right = np.eye(1 << (n - qubit - 1))
        matrix += np.kron(np.kron(left, sigma), right)
    return 0.5 * matrix


@lru_cache(maxsize=None)
def df_subspace_basis(n: int) -> DfBasis:
    """
    Orthonormal basis of the common nullspace of J_x, J_y, J_z.

    Raises:
        DomainError: If n is odd or not positive
        CapacityError: If n exceeds the solver limit
    """
    if n < 2 or n % 2:
        raise DomainError(f"DF subspace needs an even qubit count >= 2, got {n}")
    if n > SOLVER_MAX_QUBITS:
        raise CapacityError(f"Subspace solver supports up to {SOLVER_MAX_QUBITS} qubits, got {n}")

    stacked = np.vstack([collective_spin_matrix(n, axis) for axis in "xyz"])
    _, singular, vh = scipy.linalg.svd(stacked)
    rank = int(np.sum(singular > SINGULAR_TOL))
    null = vh[rank:].conj()
    states = tuple(StateVector(n, row).with_canonical_phase() for row in null)
    logger.debug("DF subspace for %d qubits: dimension %d", n, len(states))

    expected = df_dimension(n).exact_dim
    if len(states) != expected:
        logger.warning("Solver found %d DF states for %d qubits, formula gives %d",
                       len(states), n, expected)
    return DfBasis(n, states, tuple(f"v{k}" for k in range(1, len(states) + 1)))


def gram_schmidt(vectors: Sequence[StateVector], against: Sequence[StateVector] = (),
                 drop_tol: float = DROP_TOL) -> List[StateVector]:
    """
    Modified Gram-Schmidt with one re-orthogonalization pass.

    Args:
        vectors: Candidates, processed in order
        against: Orthonormal vectors the output must be orthogonal to
        drop_tol: Candidates whose residual norm falls below this are dropped

    Returns:
        New orthonormal vectors (the `against` vectors are not repeated)
    """
    basis = [v.amplitudes for v in against]
    accepted: List[StateVector] = []
    for vector in vectors:
        residual = np.array(vector.amplitudes)
        for _ in range(2):
            for q in basis:
                residual = residual - np.vdot(q, residual) * q
        norm = np.linalg.norm(residual)
        if norm < drop_tol:
            continue
        unit = residual / norm
        basis.append(unit)
        accepted.append(StateVector(vector.n_qubits, unit))
    return accepted


def _check_orthonormal_df(existing: Sequence[StateVector], n: int, tol: float = DEFAULT_TOL):
    for k, state in enumerate(existing):
        if state.n_qubits != n:
            raise PreconditionError(f"Input {k} has {state.n_qubits} qubits, expected {n}")
        residual = df_residual(state)
        if residual >= tol:
            raise PreconditionError(f"Input {k} is not DF (spin residual {residual:.3g})")
    if existing:
        deviation = float(np.max(np.abs(gram_matrix(existing) - np.eye(len(existing)))))
        if deviation >= tol:
            raise PreconditionError(f"Inputs are not orthonormal (Gram deviation {deviation:.3g})")


def complete_basis(existing: Sequence[StateVector], n: int) -> List[StateVector]:
    """
    Orthonormal basis of the part of the DF subspace orthogonal to `existing`.

    The seeds are the solver's nullspace basis, taken in order of decreasing
    weight outside span(existing).

    Raises:
        PreconditionError: If an input is not DF or the inputs are not orthonormal
    """
    existing = list(existing)
    _check_orthonormal_df(existing, n)
    # Solver output spans the whole DF subspace; the given states are projected out below
    seeds = list(df_subspace_basis(n).states)

    def outside_weight(v: StateVector) -> float:
        return 1.0 - sum(abs(np.vdot(e.amplitudes, v.amplitudes)) ** 2 for e in existing)

    # Seeds mostly inside span(existing) go last so they are dropped, not amplified
    seeds.sort(key=outside_weight, reverse=True)
    completion = [v.with_canonical_phase() for v in gram_schmidt(seeds, against=existing)]
    logger.debug("Completed %d given %d-qubit DF states with %d more",
                 len(existing), n, len(completion))
    return completion


def _pin_phase(psi: StateVector, bitstring: str) -> StateVector:
    lead = psi.amplitude(bitstring)
    return psi.scaled(abs(lead) / lead)


@lru_cache(maxsize=None)
def singlet() -> StateVector:
    """(|01> - |10>)/sqrt 2."""
    return StateVector.from_terms(2, {"01": 1, "10": -1}, 1 / sqrt(2))


@lru_cache(maxsize=None)
def four_qubit_state(label: str) -> StateVector:
    """4-qubit DF basis: "0" the double singlet, "1" the supersinglet."""
    if label == "0":
        return tensor(singlet(), singlet())
    if label == "1":
        return StateVector.from_terms(4, FOUR_QUBIT_ONE_TERMS, 1 / (2 * sqrt(3)))
    raise UnknownLabelError(label, FOUR_QUBIT_LABELS)


def _factor(key: str) -> StateVector:
    if key == "s":
        return singlet()
    if key == "111":
        return six_qubit_state("111")
    return four_qubit_state(key)


def _from_layout(n: int, layout) -> StateVector:
    return embed(n, [(_factor(key), positions) for key, positions in layout])


@lru_cache(maxsize=None)
def six_qubit_state(label: str) -> StateVector:
    """
    6-qubit DF basis. "111" is the Gram-Schmidt residual of the four
    product states, phased so its 000111 amplitude is positive. Its
    amplitudes are +-1/(2 sqrt 3) on the 12 strings whose three qubit pairs
    are 00, 11 and one of 01/10, signed by the parity of the permutation that
    sorts the pairs into the order (00, 01|10, 11).
    """
    if label in SIX_QUBIT_LAYOUT:
        return _from_layout(6, SIX_QUBIT_LAYOUT[label])
    if label == "111":
        products = [six_qubit_state(k) for k in ("000", "011", "101", "110")]
        completion = complete_basis(products, 6)
        if len(completion) != 1:
            logger.warning("Expected a 1-dimensional 6-qubit completion, got %d", len(completion))
        return _pin_phase(completion[0], "000111")
    raise UnknownLabelError(label, SIX_QUBIT_LABELS)


@lru_cache(maxsize=None)
def eight_qubit_state(label: str) -> StateVector:
    """8-qubit DF basis: twelve products, the supersinglet "0001" and "0010"."""
    if label in EIGHT_QUBIT_LAYOUT:
        return _from_layout(8, EIGHT_QUBIT_LAYOUT[label])
    if label == "0001":
        return supersinglet_rule(4).build()
    if label == "0010":
        return StateVector.from_terms(8, EIGHT_QUBIT_0010_TERMS, 1 / (4 * sqrt(3)))
    raise UnknownLabelError(label, EIGHT_QUBIT_LABELS)


NAMED_LABELS = {
    2: SINGLET_LABELS,
    4: FOUR_QUBIT_LABELS,
    6: SIX_QUBIT_LABELS,
    8: EIGHT_QUBIT_LABELS,
}
ALL_LABELS = SINGLET_LABELS + FOUR_QUBIT_LABELS + SIX_QUBIT_LABELS + EIGHT_QUBIT_LABELS


def state_for_label(label: str) -> StateVector:
    """Look up any named DF state; the label length fixes the qubit count."""
    if label == "s":
        return singlet()
    if label in FOUR_QUBIT_LABELS:
        return four_qubit_state(label)
    if label in SIX_QUBIT_LABELS:
        return six_qubit_state(label)
    if label in EIGHT_QUBIT_LABELS:
        return eight_qubit_state(label)
    raise UnknownLabelError(label, ALL_LABELS)


def named_basis(n: int) -> DfBasis:
    """The labelled basis for n in {2, 4, 6, 8}, labels in the usual order."""
    if n not in NAMED_LABELS:
        raise DomainError(f"No named basis for {n} qubits; choose one of {sorted(NAMED_LABELS)}")
    labels = NAMED_LABELS[n]
    return DfBasis(n, tuple(state_for_label(label) for label in labels), labels)


def product_states(n: int) -> List[StateVector]:
    """The named states built from lower-dimensional DF factors."""
    if n == 4:
        return [four_qubit_state("0")]
    if n == 6:
        return [six_qubit_state(k) for k in SIX_QUBIT_LAYOUT]
    if n == 8:
        return [eight_qubit_state(k) for k in EIGHT_QUBIT_LAYOUT]
    raise DomainError(f"No product states listed for {n} qubits")


@dataclass(frozen=True)
class LogicalEncoding:
    theta: float
    phi: float


def encode_logical(enc: LogicalEncoding) -> StateVector:
    """(cos theta + e^{i phi} sin theta P_24 P_13) |0bar 1bar 1bar>."""
    base = six_qubit_state("011")
    swapped = permute(QubitPermutation.product(6, (2, 4), (1, 3)), base)
    amps = (np.cos(enc.theta) * base.amplitudes
            + np.exp(1j * enc.phi) * np.sin(enc.theta) * swapped.amplitudes)
    return StateVector(6, amps)
