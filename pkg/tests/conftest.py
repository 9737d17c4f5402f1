import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260215)


ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance_line():
    """Record the one-line verdict of an acceptance criterion."""

    def record(number, passed, detail, skipped=False):
        verdict = "SKIP" if skipped else ("PASS" if passed else "FAIL")
        ACCEPTANCE_LINES[number] = f"criterion {number}: {verdict}  {detail}"
        print(ACCEPTANCE_LINES[number])

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
