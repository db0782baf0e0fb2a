import numpy as np
import pytest

# Lines recorded by the acceptance tests; echoed after the run so the
# per-criterion verdicts stay visible even with captured stdout.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance_report():
    return ACCEPTANCE_LINES


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
