import os

import pytest

from novbar.exactnum import QQ, GF, ValueGroup
from novbar.novikov import NovikovField

# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES: list = []


@pytest.fixture
def QT():
    return NovikovField(QQ)


@pytest.fixture
def QZ():
    return NovikovField(QQ, ValueGroup.parse("discrete:1"))


@pytest.fixture
def QH():
    return NovikovField(QQ, ValueGroup.parse("discrete:1/2"))


@pytest.fixture
def Q2():
    return NovikovField(QQ, ValueGroup.parse("quad:2:1,sqrt(2)"))


@pytest.fixture
def F2():
    return NovikovField(GF(2))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
