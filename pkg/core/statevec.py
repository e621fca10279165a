"""
Dense n-qubit pure states and the primitive operations on them.

Qubit 1 is the most significant bit: |b1 b2 ... bn> lives at index
sum(b_i * 2**(n - i)), so |01> = |0> (x) |1> is index 1 of 4.
"""
from dataclasses import dataclass, field
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from core.errors import CapacityError, InvalidUnitaryError, ShapeError

MAX_QUBITS = 10
NORM_TOL = 1e-12
DEFAULT_TOL = 1e-10
# Amplitudes below this are treated as structural zeros when choosing a phase
PHASE_PIN_TOL = 1e-10

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def index_of(bitstring: str) -> int:
    """Basis index of a bitstring written qubit 1 first."""
    if not bitstring or any(c not in "01" for c in bitstring):
        raise ShapeError(f"Not a bitstring: {bitstring!r}")
    return int(bitstring, 2)


def bitstring_of(index: int, n_qubits: int) -> str:
    """Bitstring (qubit 1 first) of a basis index."""
    return format(index, f"0{n_qubits}b")


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Immutable dense amplitude vector over the n-qubit computational basis.

    Args:
        n_qubits: Number of qubits, 1..MAX_QUBITS
        amplitudes: 2**n_qubits complex amplitudes, copied and frozen
    """
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise CapacityError(
                f"{self.n_qubits} qubits outside supported range 1..{MAX_QUBITS}"
            )
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 1 << self.n_qubits:
            raise ShapeError(
                f"{amps.shape[0]} amplitudes given for {self.n_qubits} qubits"
            )
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def basis(cls, bitstring: str) -> "StateVector":
        """Computational basis state |bitstring>."""
        n = len(bitstring)
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[index_of(bitstring)] = 1.0
        return cls(n, amps)

    @classmethod
    def from_terms(cls, n_qubits: int, terms: Mapping[str, complex],
                   scale: complex = 1.0) -> "StateVector":
        """
        Build a state from a bitstring -> coefficient mapping.

        Args:
            n_qubits: Number of qubits
            terms: Coefficients keyed by bitstring (qubit 1 first)
            scale: Common factor applied to every coefficient

        Returns:
            The state sum(scale * c |s>)
        """
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        for bits, coeff in terms.items():
            if len(bits) != n_qubits:
                raise ShapeError(f"Bitstring {bits!r} is not {n_qubits} long")
            amps[index_of(bits)] = scale * coeff
        return cls(n_qubits, amps)

    def amplitude(self, bitstring: str) -> complex:
        if len(bitstring) != self.n_qubits:
            raise ShapeError(f"Bitstring {bitstring!r} is not {self.n_qubits} long")
        return complex(self.amplitudes[index_of(bitstring)])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0) <= tol

    def normalized(self) -> "StateVector":
        norm = self.norm()
        if norm == 0.0:
            raise ShapeError("Cannot normalize the zero vector")
        return StateVector(self.n_qubits, self.amplitudes / norm)

    def scaled(self, factor: complex) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes * factor)

    def with_canonical_phase(self) -> "StateVector":
        """Same ray, with the first non-negligible amplitude real and positive."""
        nonzero = np.flatnonzero(np.abs(self.amplitudes) > PHASE_PIN_TOL)
        if nonzero.size == 0:
            return self
        lead = self.amplitudes[nonzero[0]]
        return self.scaled(abs(lead) / lead)

    def nonzero_terms(self, tol: float = 0.0) -> List[Tuple[str, complex]]:
        """(bitstring, amplitude) pairs with |amplitude| > tol, in bitstring order."""
        return [
            (bitstring_of(int(i), self.n_qubits), complex(self.amplitudes[i]))
            for i in np.flatnonzero(np.abs(self.amplitudes) > tol)
        ]

    def allclose(self, other: "StateVector", atol: float = DEFAULT_TOL) -> bool:
        _check_same_size(self, other)
        return bool(np.max(np.abs(self.amplitudes - other.amplitudes)) <= atol)

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits}, terms={len(self.nonzero_terms(PHASE_PIN_TOL))})"


@dataclass(frozen=True)
class QubitPermutation:
    """
    Bijection on qubit positions 1..n.

    mapping[i - 1] is the destination position of qubit i. Composition
    follows operator notation: (p @ q) applies q first, then p.
    """
    n_qubits: int
    mapping: Tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(m) for m in self.mapping)
        if len(mapping) != self.n_qubits or sorted(mapping) != list(range(1, self.n_qubits + 1)):
            raise ShapeError(f"{mapping} is not a permutation of 1..{self.n_qubits}")
        object.__setattr__(self, "mapping", mapping)

    @classmethod
    def identity(cls, n_qubits: int) -> "QubitPermutation":
        return cls(n_qubits, tuple(range(1, n_qubits + 1)))

    @classmethod
    def transposition(cls, n_qubits: int, i: int, j: int) -> "QubitPermutation":
        """P_ij: exchange qubits i and j."""
        mapping = list(range(1, n_qubits + 1))
        if not (1 <= i <= n_qubits and 1 <= j <= n_qubits):
            raise ShapeError(f"P_{i}{j} out of range for {n_qubits} qubits")
        mapping[i - 1], mapping[j - 1] = j, i
        return cls(n_qubits, tuple(mapping))

    @classmethod
    def product(cls, n_qubits: int, *pairs: Tuple[int, int]) -> "QubitPermutation":
        """
        Product of transpositions as written, e.g. product(6, (2, 4), (1, 3))
        is P_24 P_13 (P_13 acts first).
        """
        result = cls.identity(n_qubits)
        for i, j in pairs:
            result = result @ cls.transposition(n_qubits, i, j)
        return result

    def __matmul__(self, other: "QubitPermutation") -> "QubitPermutation":
        if other.n_qubits != self.n_qubits:
            raise ShapeError("Cannot compose permutations of different sizes")
        return QubitPermutation(
            self.n_qubits, tuple(self.mapping[m - 1] for m in other.mapping)
        )

    def inverse(self) -> "QubitPermutation":
        inv = [0] * self.n_qubits
        for i, m in enumerate(self.mapping, start=1):
            inv[m - 1] = i
        return QubitPermutation(self.n_qubits, tuple(inv))

    def apply_to_string(self, symbols: str) -> str:
        """Relabel a per-qubit string (bitstring or setting) the same way as the qubits."""
        if len(symbols) != self.n_qubits:
            raise ShapeError(f"{symbols!r} is not {self.n_qubits} long")
        out = [""] * self.n_qubits
        for i, m in enumerate(self.mapping):
            out[m - 1] = symbols[i]
        return "".join(out)


@dataclass(frozen=True, eq=False)
class CollectiveUnitary:
    """
    A 2x2 special-unitary U, applied as U (x) U (x) ... (x) U.

    A unitary with det != 1 is accepted and divided by sqrt(det).

    Raises:
        InvalidUnitaryError: If u is not 2x2 or not unitary within 1e-12
    """
    u: np.ndarray

    def __post_init__(self):
        arr = np.array(self.u, dtype=np.complex128)
        if arr.shape != (2, 2):
            raise InvalidUnitaryError(f"Expected a 2x2 matrix, got shape {arr.shape}")
        residual = float(np.max(np.abs(arr.conj().T @ arr - np.eye(2))))
        if residual > NORM_TOL:
            raise InvalidUnitaryError(f"Matrix is not unitary (residual {residual:.3g})")
        det = np.linalg.det(arr)
        if det != 1:
            arr = arr / np.sqrt(det)
        object.__setattr__(self, "u", _frozen(arr))

    @classmethod
    def identity(cls) -> "CollectiveUnitary":
        return cls(np.eye(2))

    @classmethod
    def z_rotation(cls, theta: float) -> "CollectiveUnitary":
        return cls(np.diag([np.exp(0.5j * theta), np.exp(-0.5j * theta)]))

    @classmethod
    def from_floats(cls, values: Sequence[float]) -> "CollectiveUnitary":
        """From 8 floats: re/im of u00, u01, u10, u11."""
        if len(values) != 8:
            raise InvalidUnitaryError(f"Expected 8 floats, got {len(values)}")
        v = [float(x) for x in values]
        return cls(np.array([[complex(v[0], v[1]), complex(v[2], v[3])],
                             [complex(v[4], v[5]), complex(v[6], v[7])]]))

    def unitarity_residual(self) -> float:
        return float(np.max(np.abs(self.u.conj().T @ self.u - np.eye(2))))


def _check_same_size(a: StateVector, b: StateVector):
    if a.n_qubits != b.n_qubits:
        raise ShapeError(f"Qubit counts differ: {a.n_qubits} vs {b.n_qubits}")


def _apply_local(psi: StateVector, gates: Sequence[Optional[np.ndarray]]) -> StateVector:
    """Apply gates[i] to qubit i + 1; None leaves that qubit alone."""
    n = psi.n_qubits
    tensor = psi.amplitudes.reshape([2] * n)
    for axis, gate in enumerate(gates):
        if gate is None:
            continue
        tensor = np.moveaxis(np.tensordot(gate, tensor, axes=([1], [axis])), 0, axis)
    return StateVector(n, np.ascontiguousarray(tensor).reshape(-1))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """
    Tensor product a (x) b, with a's qubits first.

    Raises:
        CapacityError: If the product has more than MAX_QUBITS qubits
    """
    n = a.n_qubits + b.n_qubits
    if n > MAX_QUBITS:
        raise CapacityError(f"Tensor product of {n} qubits exceeds {MAX_QUBITS}")
    return StateVector(n, np.kron(a.amplitudes, b.amplitudes))


def tensor_all(states: Iterable[StateVector]) -> StateVector:
    states = list(states)
    result = states[0]
    for state in states[1:]:
        result = tensor(result, state)
    return result


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in a."""
    _check_same_size(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|, the overlap magnitude used for comparisons up to global phase."""
    return abs(inner(a, b))


def permute(p: QubitPermutation, psi: StateVector) -> StateVector:
    """Move qubit i to position p.mapping[i-1]. Pure re-indexing."""
    if p.n_qubits != psi.n_qubits:
        raise ShapeError(f"Permutation on {p.n_qubits} qubits applied to {psi.n_qubits}")
    n = psi.n_qubits
    # new axis k holds old axis inv[k]
    axes = [m - 1 for m in p.inverse().mapping]
    moved = psi.amplitudes.reshape([2] * n).transpose(axes)
    return StateVector(n, np.ascontiguousarray(moved).reshape(-1))


def embed(n_qubits: int, factors: Sequence[Tuple[StateVector, Sequence[int]]]) -> StateVector:
    """
    Place factor states on the given qubit positions.

    embed(6, [(singlet, (3, 4)), (bar1, (1, 2, 5, 6))]) is
    |psi->_34 (x) |1>_1256: the factor's qubit k lands on positions[k - 1].
    """
    positions = [pos for _, where in factors for pos in where]
    for state, where in factors:
        if state.n_qubits != len(where):
            raise ShapeError(f"{state.n_qubits}-qubit factor given positions {tuple(where)}")
    if sorted(positions) != list(range(1, n_qubits + 1)):
        raise ShapeError(f"Positions {positions} do not cover 1..{n_qubits}")
    product = tensor_all(state for state, _ in factors)
    return permute(QubitPermutation(n_qubits, tuple(positions)), product)


def apply_collective(u: CollectiveUnitary, psi: StateVector) -> StateVector:
    """U^(x)n |psi>."""
    return _apply_local(psi, [u.u] * psi.n_qubits)


def apply_independent(us: Sequence[CollectiveUnitary], psi: StateVector) -> StateVector:
    """Apply us[i] to qubit i + 1."""
    if len(us) != psi.n_qubits:
        raise ShapeError(f"{len(us)} unitaries given for {psi.n_qubits} qubits")
    return _apply_local(psi, [u.u for u in us])


def apply_local_gates(gates: Sequence[Optional[np.ndarray]], psi: StateVector) -> StateVector:
    """Apply arbitrary single-qubit matrices (None = identity), e.g. basis changes."""
    if len(gates) != psi.n_qubits:
        raise ShapeError(f"{len(gates)} gates given for {psi.n_qubits} qubits")
    return _apply_local(psi, gates)


def gram_matrix(states: Sequence[StateVector]) -> np.ndarray:
    """Matrix of pairwise inner products <states[i]|states[j]>."""
    if not states:
        return np.zeros((0, 0), dtype=np.complex128)
    for state in states[1:]:
        _check_same_size(states[0], state)
    columns = np.column_stack([s.amplitudes for s in states])
    return columns.conj().T @ columns
