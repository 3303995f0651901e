import pytest

from extising.fsymbols import all_f_symbols
from extising.model import build_extended_ising
from extising.rsymbols import solve_r

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def models():
    return {k: build_extended_ising(k) for k in range(0, 5)}


@pytest.fixture(scope="session")
def fsets(models):
    return {k: all_f_symbols(models[k]) for k in (1, 2, 3)}


@pytest.fixture(scope="session")
def solved(fsets):
    """(k, f_index) -> list of RSymbols, for k <= 2."""
    return {(k, i): solve_r(f) for k in (1, 2) for i, f in enumerate(fsets[k])}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
