"""
BB84 over decoherence-free states, with every signal state obtained by
permuting qubits of the single 6-qubit state |0bar 1bar 1bar>.

Per round: Alice picks (bit, basis) and sends the signal state; the channel
applies noise once; an intercept-resend Eve (optional) measures with the
fixed setting of a random basis and resends the signal state she inferred;
Bob measures with the fixed setting of his random basis. Rounds with
matching Alice/Bob bases are kept.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple
import concurrent.futures
from concurrent.futures import ProcessPoolExecutor
import logging

import numpy as np

from core.dfstates import six_qubit_state
from core.errors import DomainError, ProtocolError, UnknownLabelError
from core.measurement import DECIDE_A, DECIDE_B, Discriminator, MeasurementSetting, discriminate, sample
from core.noise import COLLECTIVE_HAAR, NoiseModel, apply_noise, derive_seed
from core.resource_manager import get_resource_manager
from core.statevec import QubitPermutation, StateVector, inner, permute

logger = logging.getLogger(__name__)

COMPUTATIONAL = 0
HADAMARD_BASIS = 1

COMP_SETTING = "zzxxzz"
HAD_SETTING = "xzzxzz"

EVE_NONE = "none"
EVE_INTERCEPT = "intercept"
EVE_CHOICES = (EVE_NONE, EVE_INTERCEPT)

# label -> (basis, bit)
SIGNAL_LABELS = {
    "hat0": (COMPUTATIONAL, 0),
    "hatplus": (HADAMARD_BASIS, 0),
    "hat1": (COMPUTATIONAL, 1),
    "hatminus": (HADAMARD_BASIS, 1),
}

# Seed streams per round
STREAM_PARTIES = 0
STREAM_CHANNEL = 1
STREAM_EVE = 2


@dataclass(frozen=True, eq=False)
class ProtocolState:
    """The four signal states, the two fixed settings and their discriminators."""
    comp0: StateVector
    had_plus: StateVector
    comp1: StateVector
    had_minus: StateVector
    comp_setting: MeasurementSetting
    had_setting: MeasurementSetting
    comp_discriminator: Discriminator
    had_discriminator: Discriminator

    def signal(self, basis: int, bit: int) -> StateVector:
        if basis == COMPUTATIONAL:
            return self.comp1 if bit else self.comp0
        return self.had_minus if bit else self.had_plus

    def setting(self, basis: int) -> MeasurementSetting:
        return self.comp_setting if basis == COMPUTATIONAL else self.had_setting

    def decode(self, basis: int, outcome: str) -> Optional[int]:
        """Bit for an outcome, or None when it lies outside both supports."""
        discriminator = self.comp_discriminator if basis == COMPUTATIONAL else self.had_discriminator
        decision = discriminator.decide(outcome)
        if decision == DECIDE_A:
            return 0
        if decision == DECIDE_B:
            return 1
        return None


@lru_cache(maxsize=None)
def build_protocol_states() -> ProtocolState:
    """
    |0^> = |0bar 1bar 1bar>, |+^> = P13|0^>, |1^> = P24|+^>, |-^> = P13|1^>.

    Raises:
        ProtocolError: If either fixed setting fails to separate its basis
    """
    p13 = QubitPermutation.transposition(6, 1, 3)
    p24 = QubitPermutation.transposition(6, 2, 4)
    comp0 = six_qubit_state("011")
    had_plus = permute(p13, comp0)
    comp1 = permute(p24, had_plus)
    had_minus = permute(p13, comp1)

    comp_setting = MeasurementSetting(COMP_SETTING)
    had_setting = MeasurementSetting(HAD_SETTING)
    comp = discriminate(comp_setting, comp0, comp1)
    had = discriminate(had_setting, had_plus, had_minus)
    if not comp.success:
        raise ProtocolError(f"{COMP_SETTING} does not separate |0^> from |1^> "
                            f"(success probability {comp.success_probability:.12g})")
    if not had.success:
        raise ProtocolError(f"{HAD_SETTING} does not separate |+^> from |-^> "
                            f"(success probability {had.success_probability:.12g})")
    return ProtocolState(comp0, had_plus, comp1, had_minus, comp_setting, had_setting,
                         comp.discriminator, had.discriminator)


def signal_state(label: str) -> StateVector:
    """Signal state by name: hat0, hatplus, hat1, hatminus."""
    if label not in SIGNAL_LABELS:
        raise UnknownLabelError(label, SIGNAL_LABELS)
    basis, bit = SIGNAL_LABELS[label]
    return build_protocol_states().signal(basis, bit)


@dataclass(frozen=True, eq=False)
class SessionConfig:
    """
    Args:
        rounds: Transmissions to simulate, >= 1
        noise: Channel between Alice and the first receiver
        eve: "none" or "intercept" ("intercept-resend" accepted)
        rng_seed: Master seed, >= 0
        workers: Worker processes; 0 asks the resource manager
    """
    rounds: int
    noise: NoiseModel = field(default_factory=lambda: NoiseModel(COLLECTIVE_HAAR))
    eve: str = EVE_NONE
    rng_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.eve == "intercept-resend":
            object.__setattr__(self, "eve", EVE_INTERCEPT)
        if self.rounds < 1:
            raise DomainError(f"rounds must be >= 1, got {self.rounds}")
        if self.eve not in EVE_CHOICES:
            raise DomainError(f"eve must be one of {', '.join(EVE_CHOICES)}, got {self.eve!r}")
        if self.rng_seed < 0:
            raise DomainError(f"rng_seed must be >= 0, got {self.rng_seed}")
        if self.workers < 0:
            raise DomainError(f"workers must be >= 0, got {self.workers}")


@dataclass(frozen=True)
class RoundRecord:
    """Transcript entry for one transmission."""
    index: int
    alice_basis: int
    alice_bit: int
    bob_basis: int
    bob_outcome: str
    bob_bit: int
    flagged: bool
    eve_basis: Optional[int] = None
    eve_bit: Optional[int] = None

    @property
    def sifted(self) -> bool:
        return self.alice_basis == self.bob_basis

    @property
    def error(self) -> bool:
        return self.sifted and self.bob_bit != self.alice_bit


@dataclass
class SessionStats:
    rounds_sent: int
    rounds_sifted: int
    sifted_fraction: float
    errors_in_sifted: int
    qber: float
    qber_given_eve_wrong_basis: Optional[float]
    raw_key_alice: List[int]
    raw_key_bob: List[int]
    flagged_outcomes: int
    transcript: List[RoundRecord] = field(repr=False)

    def summary_line(self) -> str:
        return f"bb84 {self.rounds_sent} {self.rounds_sifted} {self.errors_in_sifted} {self.qber:.12g}"


def _round_choices(cfg: SessionConfig, index: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(cfg.rng_seed, index, STREAM_PARTIES))


def _channel_seed(cfg: SessionConfig, index: int) -> int:
    # Fresh draw per transmission
    if cfg.noise.per_round:
        return derive_seed(cfg.rng_seed, index, STREAM_CHANNEL)
    # Static channel: one draw shared by every round of the session
    return derive_seed(cfg.rng_seed, STREAM_CHANNEL)


def _measure(protocol: ProtocolState, basis: int, psi: StateVector,
             rng: np.random.Generator) -> Tuple[str, Optional[int]]:
    outcome = sample(protocol.setting(basis), psi, int(rng.integers(2**32)), 1)[0]
    return outcome, protocol.decode(basis, outcome)


def run_round(protocol: ProtocolState, cfg: SessionConfig, index: int) -> RoundRecord:
    """Simulate transmission `index` of a session; depends only on (cfg, index)."""
    parties = _round_choices(cfg, index)
    alice_bit = int(parties.integers(2))
    alice_basis = int(parties.integers(2))
    bob_basis = int(parties.integers(2))

    # Channel noise acts before any interception
    psi = apply_noise(cfg.noise, protocol.signal(alice_basis, alice_bit), _channel_seed(cfg, index))

    eve_basis = eve_bit = None
    if cfg.eve == EVE_INTERCEPT:
        eve_rng = np.random.default_rng(derive_seed(cfg.rng_seed, index, STREAM_EVE))
        eve_basis = int(eve_rng.integers(2))
        _, eve_bit = _measure(protocol, eve_basis, psi, eve_rng)
        if eve_bit is None:
            # Outcome outside both supports: guess, then resend a clean signal
            eve_bit = int(eve_rng.integers(2))
        psi = protocol.signal(eve_basis, eve_bit)

    bob_outcome, bob_bit = _measure(protocol, bob_basis, psi, parties)
    flagged = bob_bit is None
    if flagged:
        # Inconclusive; keep a random bit so the round still sifts normally
        bob_bit = int(parties.integers(2))

    return RoundRecord(index, alice_basis, alice_bit, bob_basis, bob_outcome, bob_bit,
                       flagged, eve_basis, eve_bit)


def run_batch(cfg: SessionConfig, start: int, stop: int) -> List[RoundRecord]:
    """Rounds start..stop-1; the unit of work handed to a worker process."""
    protocol = build_protocol_states()
    return [run_round(protocol, cfg, index) for index in range(start, stop)]


def summarize(records: List[RoundRecord], eve_enabled: bool) -> SessionStats:
    sifted = [r for r in records if r.sifted]
    errors = sum(r.error for r in sifted)
    qber = errors / len(sifted) if sifted else 0.0

    qber_wrong = None
    if eve_enabled:
        wrong = [r for r in sifted if r.eve_basis != r.alice_basis]
        qber_wrong = sum(r.error for r in wrong) / len(wrong) if wrong else 0.0

    return SessionStats(
        rounds_sent=len(records),
        rounds_sifted=len(sifted),
        sifted_fraction=len(sifted) / len(records),
        errors_in_sifted=errors,
        qber=qber,
        qber_given_eve_wrong_basis=qber_wrong,
        raw_key_alice=[r.alice_bit for r in sifted],
        raw_key_bob=[r.bob_bit for r in sifted],
        flagged_outcomes=sum(r.flagged for r in records),
        transcript=records,
    )


def run_session(cfg: SessionConfig,
                progress_callback: Optional[Callable[[int, int], None]] = None) -> SessionStats:
    """
    Simulate a full session.

    Rounds are split into batches; with more than one worker the batches
    run in a process pool and are put back in round order, so the result
    depends only on cfg.

    Args:
        cfg: Session configuration
        progress_callback: Optional callback(processed_rounds, total_rounds)

    Returns:
        Statistics and transcript over all rounds
    """
    protocol = build_protocol_states()
    resources = get_resource_manager().get_optimal_resources()
    workers = cfg.workers or resources["process_count"]
    batch_size = resources["batch_size"]
    batches = [(start, min(start + batch_size, cfg.rounds))
               for start in range(0, cfg.rounds, batch_size)]
    logger.debug("BB84 session: %d rounds, %d batches, %d workers, noise %s, eve %s",
                 cfg.rounds, len(batches), workers, cfg.noise, cfg.eve)

    results: Dict[int, List[RoundRecord]] = {}
    processed = 0
    if workers == 1 or len(batches) == 1:
        for start, stop in batches:
            results[start] = [run_round(protocol, cfg, index) for index in range(start, stop)]
            processed += stop - start
            if progress_callback and callable(progress_callback):
                progress_callback(processed, cfg.rounds)
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            future_to_batch = {executor.submit(run_batch, cfg, start, stop): (start, stop)
                               for start, stop in batches}

            for future in concurrent.futures.as_completed(future_to_batch):
                start, stop = future_to_batch[future]
                results[start] = future.result()
                processed += stop - start
                if progress_callback and callable(progress_callback):
                    progress_callback(processed, cfg.rounds)

    records = [record for start, _ in batches for record in results[start]]
    stats = summarize(records, cfg.eve == EVE_INTERCEPT)
    logger.info("BB84 session done: %d sifted, %d errors, QBER %.4f",
                stats.rounds_sifted, stats.errors_in_sifted, stats.qber)
    return stats


@dataclass(frozen=True)
class MubReport:
    """
    Overlap table |<h|c>|^2 (rows |0^>, |1^>; columns |+^>, |-^>),
    the within-basis overlaps and the Gram diagonal.
    """
    cross: Tuple[Tuple[float, float], Tuple[float, float]]
    within_comp: float
    within_had: float
    diagonal: Tuple[float, float, float, float]
    passed: bool

    def lines(self) -> List[str]:
        return [
            f"        hatplus         hatminus",
            f"hat0    {self.cross[0][0]:.12g}  {self.cross[0][1]:.12g}",
            f"hat1    {self.cross[1][0]:.12g}  {self.cross[1][1]:.12g}",
            f"|<hat0|hat1>| = {self.within_comp:.12g}",
            f"|<hatplus|hatminus>| = {self.within_had:.12g}",
            "gram diagonal = " + " ".join(f"{d:.12g}" for d in self.diagonal),
            f"mub {'PASS' if self.passed else 'FAIL'}",
        ]


def mutually_unbiased_check(tol: float = 1e-12) -> MubReport:
    """Check that the two signal bases are orthonormal and mutually unbiased."""
    protocol = build_protocol_states()
    comp = (protocol.comp0, protocol.comp1)
    had = (protocol.had_plus, protocol.had_minus)
    cross = tuple(tuple(abs(inner(h, c)) ** 2 for h in had) for c in comp)
    within_comp = abs(inner(protocol.comp0, protocol.comp1))
    within_had = abs(inner(protocol.had_plus, protocol.had_minus))
    diagonal = tuple(inner(s, s).real for s in comp + had)

    passed = (all(abs(v - 0.5) <= tol for row in cross for v in row)
              and within_comp <= tol and within_had <= tol
              and all(abs(d - 1.0) <= tol for d in diagonal))
    return MubReport(cross, within_comp, within_had, diagonal, passed)
