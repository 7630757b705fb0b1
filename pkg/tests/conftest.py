from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hyperell.fqx import parse_field  # noqa: E402


@pytest.fixture(scope="session")
def F3():
    return parse_field("3")


@pytest.fixture(scope="session")
def F5():
    return parse_field("5")


@pytest.fixture(scope="session")
def F9():
    return parse_field("9")


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
