import pytest

from core.bb84 import build_protocol_states
from core.dfstates import EIGHT_QUBIT_LABELS, SIX_QUBIT_LABELS, eight_qubit_state, six_qubit_state


@pytest.fixture(scope="session")
def six_basis():
    return {label: six_qubit_state(label) for label in SIX_QUBIT_LABELS}


@pytest.fixture(scope="session")
def eight_basis():
    return {label: eight_qubit_state(label) for label in EIGHT_QUBIT_LABELS}


@pytest.fixture(scope="session")
def protocol():
    return build_protocol_states()
