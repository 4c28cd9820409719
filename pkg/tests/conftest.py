import numpy as np
import pytest

from cronav.dynamics import OrbitParams

# one-line criterion verdicts collected by test_acceptance, echoed at the end
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def omega() -> float:
    return OrbitParams().omega


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
