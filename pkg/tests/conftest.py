from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from spreadlab.constructions import witness_2x2, witness_3x3

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# filled by test_acceptance.py, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def ref_A5():
    # displayed 5x5 matrix A
    return [
        [0, 4, 0, 0, 0],
        [0, 5, 3, 0, 0],
        [2, 0, 5, 2, 0],
        [0, 2, 0, 5, 1],
        [2, 0, 2, 0, 5],
    ]


@pytest.fixture
def ref_U5():
    return [
        [8, 4, 0, 0, 0],
        [0, 3, 3, 0, 0],
        [0, 0, 3, 2, 0],
        [0, 0, 0, 3, 1],
        [0, 0, 0, 0, 3],
    ]


@pytest.fixture
def diag01():
    return witness_2x2()


@pytest.fixture
def witness3():
    return witness_3x3()


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)
