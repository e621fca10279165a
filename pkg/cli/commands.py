"""
Command dispatch and report rendering.

Every command returns a CommandResult whose last line is a single
machine-readable summary. Exit statuses: 0 success, 1 verification
failure, 2 usage or input error.
"""
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence
import argparse
import json
import logging
import sys

from cli.parser import build_parser
from core.bb84 import (
    EVE_INTERCEPT, SIGNAL_LABELS, SessionConfig, mutually_unbiased_check, run_session, signal_state,
)
from core.config import Settings, SettingsManager
from core.dffile import read_state, write_state
from core.dfstates import (
    ALL_LABELS, LogicalEncoding, complete_basis, df_dimension, df_residual, eight_qubit_state,
    encode_logical, four_qubit_state, named_basis, product_states, six_qubit_state, state_for_label,
)
from core.errors import DfSimError, ProtocolError, UnknownLabelError
from core.measurement import MeasurementSetting, discriminate, verify_table1
from core.noise import invariance_score, parse_noise_model
from core.resource_manager import get_resource_manager
from core.statevec import PHASE_PIN_TOL, StateVector, fidelity

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

INVARIANCE_TOL = 1e-10
GRAM_TOL = 1e-12


@dataclass
class CommandResult:
    status: int
    lines: List[str] = field(default_factory=list)

    @property
    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def fmt(value: float) -> str:
    return f"{value:.12g}"


def resolve_label(label: str) -> StateVector:
    """Named DF state or BB84 signal state."""
    if label in SIGNAL_LABELS:
        return signal_state(label)
    try:
        return state_for_label(label)
    except UnknownLabelError:
        raise UnknownLabelError(label, ALL_LABELS + tuple(SIGNAL_LABELS))


def cmd_gen(args, settings: Settings) -> CommandResult:
    psi = resolve_label(args.label)
    path = write_state(psi, args.output)
    return CommandResult(EXIT_OK, [
        f"label {args.label}",
        f"n_qubits {psi.n_qubits}",
        f"terms {len(psi.nonzero_terms())}",
        f"gen {args.label} {path}",
    ])


def cmd_verify_invariance(args, settings: Settings) -> CommandResult:
    psi = read_state(args.input)
    if not psi.is_normalized():
        logger.warning("State in %s has norm %.15f; normalizing", args.input, psi.norm())
        psi = psi.normalized()
    trials = args.trials if args.trials is not None else settings.default_trials
    score = invariance_score(psi, trials, args.seed)
    residual = df_residual(psi)
    passed = score >= 1.0 - INVARIANCE_TOL
    return CommandResult(EXIT_OK if passed else EXIT_FAIL, [
        f"n_qubits {psi.n_qubits}",
        f"trials {trials}",
        f"seed {args.seed}",
        f"min_fidelity {fmt(score)}",
        f"spin_residual {fmt(residual)}",
        f"invariance {fmt(score)} {'PASS' if passed else 'FAIL'}",
    ])


def cmd_dim(args, settings: Settings) -> CommandResult:
    record = df_dimension(args.n)
    return CommandResult(EXIT_OK, [
        f"n_qubits {record.n_qubits}",
        f"exact_dim {record.exact_dim}",
        f"logical_qubits {fmt(record.logical_qubits)}",
        f"asymptotic_estimate {fmt(record.asymptotic_estimate)}",
        f"efficiency {fmt(record.efficiency)}",
        f"dim {record.n_qubits} {record.exact_dim}",
    ])


def cmd_table1(args, settings: Settings) -> CommandResult:
    report = verify_table1()
    status = EXIT_OK if report.passed == report.total else EXIT_FAIL
    return CommandResult(status, report.lines())


def cmd_complete(args, settings: Settings) -> CommandResult:
    n = args.n
    existing = product_states(n)
    reference: Optional[StateVector] = None
    if n == 4:
        reference = four_qubit_state("1")
    elif n == 6:
        reference = six_qubit_state("111")
    elif args.with_supersinglet:
        existing.append(eight_qubit_state("0001"))
        reference = eight_qubit_state("0010")

    completion = complete_basis(existing, n)
    expected = df_dimension(n).exact_dim - len(existing)
    lines = [
        f"n_qubits {n}",
        f"inputs {len(existing)}",
        f"df_dimension {df_dimension(n).exact_dim}",
        f"completion {len(completion)}",
    ]
    for k, psi in enumerate(completion, start=1):
        lines.append(f"state {k} terms {len(psi.nonzero_terms(PHASE_PIN_TOL))} "
                     f"spin_residual {fmt(df_residual(psi))}")
    passed = len(completion) == expected
    if reference is not None and len(completion) == 1:
        overlap = fidelity(reference, completion[0])
        lines.append(f"fidelity_with_named_state {fmt(overlap)}")
        passed = passed and overlap >= 1.0 - INVARIANCE_TOL
    lines.append(f"complete {n} {len(completion)}")
    return CommandResult(EXIT_OK if passed else EXIT_FAIL, lines)


def _log_progress(processed: int, total: int):
    logger.debug("BB84 progress: %d/%d rounds", processed, total)


def cmd_bb84(args, settings: Settings) -> CommandResult:
    cfg = SessionConfig(
        rounds=args.rounds if args.rounds is not None else settings.default_rounds,
        noise=parse_noise_model(args.noise, per_round=not args.static_noise),
        eve=args.eve,
        rng_seed=args.seed,
        workers=args.workers if args.workers is not None else settings.workers,
    )
    stats = run_session(cfg, progress_callback=_log_progress)
    lines = [
        f"noise {cfg.noise}{'' if cfg.noise.per_round else ' (static)'}",
        f"eve {cfg.eve}",
        f"seed {cfg.rng_seed}",
        f"rounds_sent {stats.rounds_sent}",
        f"rounds_sifted {stats.rounds_sifted}",
        f"sifted_fraction {fmt(stats.sifted_fraction)}",
        f"errors_in_sifted {stats.errors_in_sifted}",
        f"qber {fmt(stats.qber)}",
    ]
    if cfg.eve == EVE_INTERCEPT:
        lines.append(f"qber_given_eve_wrong_basis {fmt(stats.qber_given_eve_wrong_basis)}")
    lines.append(f"flagged_outcomes {stats.flagged_outcomes}")
    lines.append(stats.summary_line())
    return CommandResult(EXIT_OK, lines)


def cmd_distinguish(args, settings: Settings) -> CommandResult:
    a = resolve_label(args.label_a)
    b = resolve_label(args.label_b)
    setting = MeasurementSetting(args.setting)
    result = discriminate(setting, a, b)
    verdict = "PASS" if result.success else "FAIL"
    return CommandResult(EXIT_OK if result.success else EXIT_FAIL, [
        f"success_probability {fmt(result.success_probability)}",
        f"max_overlap {fmt(result.max_overlap)}",
        f"distinguish {args.label_a} {args.label_b} {setting} {verdict}",
    ])


def cmd_mub(args, settings: Settings) -> CommandResult:
    report = mutually_unbiased_check()
    return CommandResult(EXIT_OK if report.passed else EXIT_FAIL, report.lines())


def cmd_encode(args, settings: Settings) -> CommandResult:
    psi = encode_logical(LogicalEncoding(args.theta, args.phi))
    path = write_state(psi, args.output)
    return CommandResult(EXIT_OK, [
        f"norm {fmt(psi.norm())}",
        f"spin_residual {fmt(df_residual(psi))}",
        f"encode {fmt(args.theta)} {fmt(args.phi)} {path}",
    ])


def cmd_basis(args, settings: Settings) -> CommandResult:
    basis = named_basis(args.n)
    lines = [f"{label} terms {len(psi.nonzero_terms(PHASE_PIN_TOL))}"
             for label, psi in zip(basis.labels, basis.states)]
    gram = basis.gram_residual()
    spin = basis.df_residual()
    passed = gram <= GRAM_TOL and spin < INVARIANCE_TOL
    lines += [
        f"gram_residual {fmt(gram)}",
        f"spin_residual {fmt(spin)}",
        f"basis {args.n} {len(basis)} {'PASS' if passed else 'FAIL'}",
    ]
    return CommandResult(EXIT_OK if passed else EXIT_FAIL, lines)


def cmd_settings(args, settings: Settings) -> CommandResult:
    lines = json.dumps(asdict(settings), indent=2).splitlines()
    if args.write:
        manager = SettingsManager()
        manager.settings = settings
        lines.append(f"settings {manager.save_settings(args.write)}")
    else:
        lines.append("settings effective")
    return CommandResult(EXIT_OK, lines)


COMMANDS: Dict[str, Callable[[argparse.Namespace, Settings], CommandResult]] = {
    "gen": cmd_gen,
    "verify-invariance": cmd_verify_invariance,
    "dim": cmd_dim,
    "table1": cmd_table1,
    "complete": cmd_complete,
    "bb84": cmd_bb84,
    "distinguish": cmd_distinguish,
    "mub": cmd_mub,
    "encode": cmd_encode,
    "basis": cmd_basis,
    "settings": cmd_settings,
}


def dispatch(args: argparse.Namespace, settings: Optional[Settings] = None) -> CommandResult:
    """
    Run a parsed command.

    Library errors become exit status 2 (usage/input), except a failed
    protocol construction, which is a verification failure (1).
    """
    settings = settings or Settings()
    try:
        return COMMANDS[args.command](args, settings)
    except ProtocolError as e:
        return CommandResult(EXIT_FAIL, [f"error: {e}"])
    except (DfSimError, OSError) as e:
        return CommandResult(EXIT_USAGE, [f"error: {e}"])


def system_info_lines() -> List[str]:
    info = get_resource_manager().get_system_info()
    cpu = f"- CPU: {info['cpu_count']} threads ({info['physical_cores']} cores)"
    if "frequency_mhz" in info:
        cpu += f" at {info['frequency_mhz']} MHz"
    return [
        f"- Platform: {info['platform']}",
        cpu,
        f"- Memory: {info['total_memory_gb']} GB",
        f"- Using up to {info['recommended_process_count']} processes for simulation",
        f"- Batch size: {info['recommended_batch_size']} rounds",
        f"- Strategy: {info['current_strategy']}",
    ]


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run the command, print its report; returns the exit status."""
    args = build_parser().parse_args(argv)

    try:
        settings = SettingsManager(args.config).settings
    except DfSimError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    level = "DEBUG" if args.verbose else settings.log_level.upper()
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    get_resource_manager(settings.strategy)

    if args.show_resources:
        print("\n".join(system_info_lines()))

    result = dispatch(args, settings)
    stream = sys.stdout if result.status != EXIT_USAGE else sys.stderr
    stream.write(result.text)
    return result.status
