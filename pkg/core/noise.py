"""
Unitary noise channels: random collective SU(2) noise U^(x)n, a fixed
collective unitary, and an independent per-qubit control channel.
"""
from dataclasses import dataclass
from typing import List, Optional
import logging

import numpy as np

from core.errors import DomainError
from core.statevec import (
    CollectiveUnitary, StateVector, apply_collective, apply_independent, fidelity,
)

logger = logging.getLogger(__name__)

NONE = "none"
COLLECTIVE_HAAR = "collective-haar"
COLLECTIVE_FIXED = "collective-fixed"
INDEPENDENT_HAAR = "independent-haar"
NOISE_KINDS = (NONE, COLLECTIVE_HAAR, COLLECTIVE_FIXED, INDEPENDENT_HAAR)


def derive_seed(master: int, *keys: int) -> int:
    """
    Child seed for (master, keys...), e.g. derive_seed(seed, round_index).

    Children of one master are independent streams, so results do not
    depend on the order in which trials or rounds are executed.
    """
    sequence = np.random.SeedSequence([int(master), *(int(k) for k in keys)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def haar_su2(rng_seed: int) -> CollectiveUnitary:
    """
    Haar-random SU(2) element [[a, -b*], [b, a*]].

    (a, b) is a normalized pair of standard complex Gaussians, i.e. uniform
    on the unit sphere of C^2.
    """
    rng = np.random.default_rng(rng_seed)
    z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    alpha, beta = z / np.linalg.norm(z)
    return CollectiveUnitary(np.array([[alpha, -np.conj(beta)],
                                       [beta, np.conj(alpha)]]))


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """
    Args:
        kind: One of NOISE_KINDS
        unitary: The fixed unitary for collective-fixed
        per_round: Fresh draw for every transmission (protocol runs only)
    """
    kind: str = COLLECTIVE_HAAR
    unitary: Optional[CollectiveUnitary] = None
    per_round: bool = True

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise DomainError(f"Unknown noise model {self.kind!r}; expected one of {', '.join(NOISE_KINDS)}")
        if self.kind == COLLECTIVE_FIXED and self.unitary is None:
            raise DomainError("collective-fixed noise needs a unitary")

    def __str__(self):
        if self.kind == COLLECTIVE_FIXED:
            u = self.unitary.u.reshape(-1)
            floats = ",".join(f"{x:.17g}" for c in u for x in (c.real, c.imag))
            return f"{COLLECTIVE_FIXED}:{floats}"
        return self.kind


def parse_noise_model(text: str, per_round: bool = True) -> NoiseModel:
    """
    Parse `none`, `collective-haar`, `collective-fixed:<8 floats>` or
    `independent-haar`. The 8 floats are comma separated re/im pairs of
    u00, u01, u10, u11.

    Raises:
        DomainError: On an unknown kind or malformed float list
    """
    kind, _, rest = text.strip().partition(":")
    if kind == COLLECTIVE_FIXED:
        try:
            values = [float(v) for v in rest.split(",")]
        except ValueError:
            raise DomainError(f"Bad float list in noise model {text!r}")
        if len(values) != 8:
            raise DomainError(f"collective-fixed needs 8 floats, got {len(values)}")
        return NoiseModel(COLLECTIVE_FIXED, CollectiveUnitary.from_floats(values), per_round)
    if rest:
        raise DomainError(f"Noise model {kind!r} takes no parameters")
    return NoiseModel(kind, None, per_round)


def apply_noise(m: NoiseModel, psi: StateVector, rng_seed: int) -> StateVector:
    """Send psi through the channel; rng_seed fixes the random draws."""
    if m.kind == NONE:
        return psi
    if m.kind == COLLECTIVE_FIXED:
        return apply_collective(m.unitary, psi)
    if m.kind == COLLECTIVE_HAAR:
        return apply_collective(haar_su2(rng_seed), psi)
    draws = [haar_su2(derive_seed(rng_seed, qubit)) for qubit in range(psi.n_qubits)]
    return apply_independent(draws, psi)


def fidelity_samples(psi: StateVector, trials: int, rng_seed: int,
                     model: Optional[NoiseModel] = None) -> List[float]:
    """|<psi|N(psi)>| for trials independent draws of the channel."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    model = model or NoiseModel(COLLECTIVE_HAAR)
    return [fidelity(psi, apply_noise(model, psi, derive_seed(rng_seed, trial)))
            for trial in range(trials)]


def invariance_score(psi: StateVector, trials: int, rng_seed: int,
                     model: Optional[NoiseModel] = None) -> float:
    """
    Worst-case overlap min |<psi|U^(x)n psi>| over Haar-random collective
    unitaries (or over draws of `model` when given). DF states score 1.
    """
    score = min(fidelity_samples(psi, trials, rng_seed, model))
    logger.debug("Invariance score over %d trials: %.15f", trials, score)
    return score
