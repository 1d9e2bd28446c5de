import pytest

from socioclimate.config import default_params
from socioclimate.emissions import load_bundled

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def series():
    return load_bundled()


@pytest.fixture(scope="session")
def params():
    return default_params()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
