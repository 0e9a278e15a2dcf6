import random

import pytest

from qhol.qmatrix import QMatrix


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def q_half():
    return QMatrix.single(2, 0.5)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
