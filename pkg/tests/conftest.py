import pytest

from kplanar import fixtures
from kplanar.ingest import ingest_geometric
from kplanar.model import build_initial_state

ACCEPTANCE_LINES: list[str] = []


def initial(name: str):
    return build_initial_state(ingest_geometric(fixtures.ALL[name]()))


@pytest.fixture
def state():
    """Factory for the initial state of a named fixture drawing."""
    return initial


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
