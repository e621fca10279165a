"""
DFVEC v1 text format for state vectors.

    dfvec 1 <n_qubits>
    <bitstring> <re> <im>      one line per nonzero amplitude

Writers emit lines sorted by bitstring with 17 significant digits, which
round-trips IEEE doubles exactly. Readers accept any line order but reject
duplicate bitstrings.
"""
from pathlib import Path
from typing import Dict, Iterable, Union
import logging
import math

from core.errors import DfvecParseError
from core.statevec import MAX_QUBITS, StateVector

logger = logging.getLogger(__name__)

MAGIC = "dfvec"
VERSION = 1


def format_state(psi: StateVector) -> str:
    """Render a state as DFVEC v1 text."""
    lines = [f"{MAGIC} {VERSION} {psi.n_qubits}"]
    for bits, amp in psi.nonzero_terms():
        lines.append(f"{bits} {amp.real:.17g} {amp.imag:.17g}")
    return "\n".join(lines) + "\n"


def parse_state(text: Union[str, Iterable[str]]) -> StateVector:
    """
    Parse DFVEC v1 text.

    Args:
        text: Whole file contents or an iterable of lines

    Returns:
        The state described by the file

    Raises:
        DfvecParseError: On a bad header, malformed line, non-finite amplitude
            or duplicate bitstring
    """
    lines = text.splitlines() if isinstance(text, str) else list(text)
    if not lines:
        raise DfvecParseError("empty input", 1)

    header = lines[0].split()
    if len(header) != 3 or header[0] != MAGIC:
        raise DfvecParseError(f"expected '{MAGIC} {VERSION} <n_qubits>' header", 1)
    if header[1] != str(VERSION):
        raise DfvecParseError(f"unsupported version {header[1]!r}", 1)
    try:
        n_qubits = int(header[2])
    except ValueError:
        raise DfvecParseError(f"qubit count {header[2]!r} is not an integer", 1)
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise DfvecParseError(f"qubit count {n_qubits} outside 1..{MAX_QUBITS}", 1)

    terms: Dict[str, complex] = {}
    for line_number, line in enumerate(lines[1:], start=2):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 3:
            raise DfvecParseError(f"expected '<bitstring> <re> <im>', got {line.strip()!r}", line_number)
        bits, re_text, im_text = fields
        if len(bits) != n_qubits or any(c not in "01" for c in bits):
            raise DfvecParseError(f"{bits!r} is not a {n_qubits}-bit string", line_number)
        if bits in terms:
            raise DfvecParseError(f"duplicate bitstring {bits}", line_number)
        try:
            re_value, im_value = float(re_text), float(im_text)
        except ValueError:
            raise DfvecParseError(f"bad amplitude {re_text!r} {im_text!r}", line_number)
        if not (math.isfinite(re_value) and math.isfinite(im_value)):
            raise DfvecParseError(f"non-finite amplitude {re_text!r} {im_text!r}", line_number)
        terms[bits] = complex(re_value, im_value)

    return StateVector.from_terms(n_qubits, terms)


def write_state(psi: StateVector, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(format_state(psi))
    logger.debug("Wrote %d-qubit state to %s", psi.n_qubits, path)
    return path


def read_state(path: Union[str, Path]) -> StateVector:
    """
    Read a DFVEC v1 file.

    Raises:
        FileNotFoundError: If the file does not exist
        OSError: If the path cannot be read, e.g. a directory
        DfvecParseError: If the contents are malformed or not UTF-8
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"State file not found: {path}")

    lines = []
    for line_number, raw in enumerate(path.read_bytes().splitlines(), start=1):
        try:
            lines.append(raw.decode("utf-8"))
        except UnicodeDecodeError:
            raise DfvecParseError("line is not valid UTF-8", line_number)
    return parse_state(lines)
