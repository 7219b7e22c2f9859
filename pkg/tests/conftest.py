import math

import pytest

from hexfluid.antenna import AntennaConfig
from hexfluid.simulator import preset

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion_report():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(label: str, ok: bool, detail: str):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def s2_ant():
    return preset("scenario2").ant


@pytest.fixture
def flat_ant():
    return AntennaConfig.isotropic(height=30.0)


def deg(x):
    return math.radians(x)
