"""Shared test helpers and the acceptance-summary reporter."""

import numpy as np
import pytest

#: Lines registered by tests/test_acceptance.py, echoed after the run.
ACCEPTANCE_LINES = []


def record_acceptance(number, name, passed, detail):
    """Register one acceptance-criterion verdict and return it.

    The line is printed in the terminal summary so a full ``pytest`` run
    ends with one PASS/FAIL line per criterion.
    """
    verdict = "PASS" if passed else "FAIL"
    line = f"ACCEPTANCE {number} {name}: {verdict} — {detail}"
    ACCEPTANCE_LINES.append(line)
    return line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    """Fresh deterministic generator per test."""
    return np.random.default_rng(12345)
