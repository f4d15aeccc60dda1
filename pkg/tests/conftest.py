from __future__ import annotations

import pytest

from pyradesign.corpus import d7
from pyradesign.geometry import pg_design


@pytest.fixture
def D7():
    return d7()


@pytest.fixture
def pg4():
    return pg_design(4)


def B(*points: int) -> int:
    return sum(1 << p for p in points)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULT_LINES
    except ImportError:
        return
    if RESULT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in RESULT_LINES:
            terminalreporter.write_line(line)
