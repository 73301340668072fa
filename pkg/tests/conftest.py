import pytest

from hardwall.constants import compute_universal_constants

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def uc():
    return compute_universal_constants()


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
