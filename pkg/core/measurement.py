"""
Fixed single-qubit Pauli-product measurements.

Each qubit is read out in z or x. Outcome bit 0 stands for eigenvalue +1
and bit 1 for eigenvalue -1 in both bases; x readout is a Hadamard on that
qubit followed by computational-basis readout.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple
import logging

import numpy as np

from core.dfstates import SIX_QUBIT_LABELS, six_qubit_state
from core.errors import DomainError, ShapeError
from core.statevec import HADAMARD, QubitPermutation, StateVector, apply_local_gates, bitstring_of

logger = logging.getLogger(__name__)

SUPPORT_TOL = 1e-12

DECIDE_A = "A"
DECIDE_B = "B"
IMPOSSIBLE = "impossible"

PAIR_SETTINGS: Dict[Tuple[str, str], str] = {
    ("000", "011"): "zzxxzz",
    ("000", "101"): "zzzzxx",
    ("000", "110"): "xxzzzz",
    ("000", "111"): "zzzzzz",
    ("011", "101"): "zzxxzz",
    ("011", "110"): "zzzzxx",
    ("011", "111"): "xxzzzz",
    ("101", "110"): "zzxxzz",
    ("101", "111"): "zzxxzz",
    ("110", "111"): "zzzzxx",
}


@dataclass(frozen=True)
class MeasurementSetting:
    """Per-qubit basis choice, e.g. "zzxxzz" (qubit 1 first)."""
    bases: str

    def __post_init__(self):
        if not self.bases or any(b not in "zx" for b in self.bases):
            raise DomainError(f"Setting {self.bases!r} must be a non-empty string over 'z', 'x'")

    @property
    def n_qubits(self) -> int:
        return len(self.bases)

    def permuted(self, p: QubitPermutation) -> "MeasurementSetting":
        """The setting that follows the qubits when p moves them."""
        return MeasurementSetting(p.apply_to_string(self.bases))

    def __str__(self):
        return self.bases


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    setting: MeasurementSetting
    probs: np.ndarray = field(repr=False)

    def probability(self, outcome: str) -> float:
        return float(self.probs[int(outcome, 2)])

    def support(self, tol: float = SUPPORT_TOL) -> List[str]:
        return [bitstring_of(int(i), self.setting.n_qubits)
                for i in np.flatnonzero(self.probs >= tol)]


@dataclass(frozen=True)
class Discriminator:
    """Maps every outcome bitstring to A, B or impossible."""
    setting: MeasurementSetting
    decision: Mapping[str, str]

    def decide(self, outcome: str) -> str:
        return self.decision[outcome]


@dataclass(frozen=True)
class DiscriminationResult:
    """
    Outcome of a disjoint-support test.

    success_probability is 1/2 sum_o max(p_a(o), p_b(o)), the best single-shot
    guessing probability under this setting; max_overlap is max_o min(p_a, p_b).
    """
    success: bool
    discriminator: Optional[Discriminator]
    success_probability: float
    max_overlap: float


def _check_length(s: MeasurementSetting, psi: StateVector):
    if s.n_qubits != psi.n_qubits:
        raise ShapeError(f"Setting {s} has {s.n_qubits} qubits, state has {psi.n_qubits}")


def distribution(s: MeasurementSetting, psi: StateVector) -> OutcomeDistribution:
    """Outcome probabilities |<o_s|psi>|^2 for every outcome bitstring."""
    _check_length(s, psi)
    gates = [HADAMARD if b == "x" else None for b in s.bases]
    rotated = apply_local_gates(gates, psi)
    probs = np.abs(rotated.amplitudes) ** 2
    probs.flags.writeable = False
    return OutcomeDistribution(s, probs)


def sample(s: MeasurementSetting, psi: StateVector, rng_seed: int, shots: int) -> List[str]:
    """
    Draw i.i.d. outcomes from distribution(s, psi).

    Raises:
        DomainError: If shots < 1
    """
    if shots < 1:
        raise DomainError(f"shots must be >= 1, got {shots}")
    probs = distribution(s, psi).probs
    rng = np.random.default_rng(rng_seed)
    draws = rng.choice(probs.shape[0], size=shots, p=probs / probs.sum())
    return [bitstring_of(int(i), psi.n_qubits) for i in draws]


def discriminate(s: MeasurementSetting, a: StateVector, b: StateVector) -> DiscriminationResult:
    """
    Test whether s tells a from b with certainty in a single shot.

    Succeeds iff every outcome has min(p_a, p_b) below SUPPORT_TOL; the
    returned Discriminator then sends a's support to A and b's to B.

    Raises:
        ShapeError: On qubit-count mismatch
    """
    if a.n_qubits != b.n_qubits:
        raise ShapeError(f"States have {a.n_qubits} and {b.n_qubits} qubits")
    pa = distribution(s, a).probs
    pb = distribution(s, b).probs
    overlap = np.minimum(pa, pb)
    success_probability = 0.5 * float(np.sum(np.maximum(pa, pb)))
    max_overlap = float(np.max(overlap))

    if max_overlap >= SUPPORT_TOL:
        logger.debug("Setting %s does not separate the states (overlap %.3g)", s, max_overlap)
        return DiscriminationResult(False, None, success_probability, max_overlap)

    decision = {}
    for index in range(pa.shape[0]):
        outcome = bitstring_of(index, a.n_qubits)
        if pa[index] >= SUPPORT_TOL:
            decision[outcome] = DECIDE_A
        elif pb[index] >= SUPPORT_TOL:
            decision[outcome] = DECIDE_B
        else:
            decision[outcome] = IMPOSSIBLE
    return DiscriminationResult(True, Discriminator(s, decision), success_probability, max_overlap)


@dataclass(frozen=True)
class Table1Row:
    label_a: str
    label_b: str
    setting: str
    passed: bool
    success_probability: float

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{self.label_a} {self.label_b} {self.setting} {verdict} {self.success_probability:.12g}"


@dataclass(frozen=True)
class Table1Report:
    rows: Tuple[Table1Row, ...]

    @property
    def passed(self) -> int:
        return sum(row.passed for row in self.rows)

    @property
    def total(self) -> int:
        return len(self.rows)

    def summary_line(self) -> str:
        return f"table1 {self.passed} {self.total}"

    def lines(self) -> List[str]:
        return [row.line() for row in self.rows] + [self.summary_line()]


def verify_table1(states: Optional[Mapping[str, StateVector]] = None,
                  settings: Optional[Mapping[Tuple[str, str], str]] = None) -> Table1Report:
    """
    Run the fixed distinguishing setting of every pair of 6-qubit basis states.

    Args:
        states: Label -> state; defaults to the 6-qubit DF basis
        settings: Pair -> setting; defaults to PAIR_SETTINGS
    """
    if states is None:
        states = {label: six_qubit_state(label) for label in SIX_QUBIT_LABELS}
    settings = PAIR_SETTINGS if settings is None else settings

    rows = []
    for (label_a, label_b), bases in settings.items():
        result = discriminate(MeasurementSetting(bases), states[label_a], states[label_b])
        rows.append(Table1Row(label_a, label_b, bases, result.success, result.success_probability))
        if not result.success:
            logger.warning("Setting %s does not separate %s from %s", bases, label_a, label_b)
    return Table1Report(tuple(rows))
