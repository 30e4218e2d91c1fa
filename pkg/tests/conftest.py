"""Shared fixtures and the end-of-run acceptance summary hook."""

import numpy as np
import pytest

_acceptance_lines = []


def record_acceptance(line: str) -> None:
    """Stash a one-line verdict; printed after the test run finishes."""
    _acceptance_lines.append(line)


@pytest.fixture
def rng():
    """Deterministic generator so property-style tests reproduce exactly."""
    return np.random.default_rng(20240817)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in _acceptance_lines:
        terminalreporter.write_line(line)
