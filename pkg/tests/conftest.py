import pytest

from helpers import corpus

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def load():
    return lambda name: corpus(name)[0]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
