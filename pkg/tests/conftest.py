from fractions import Fraction

import pytest

from ksubmod import GroundSet, ModularFunction, UniformMatroid

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def pair_ground():
    return GroundSet(("e1", "e2"))


@pytest.fixture
def modular_example(pair_ground):
    """Gains (e1,1)=3, (e1,2)=1, (e2,1)=2, (e2,2)=2."""
    return ModularFunction(pair_ground, 2, {"e1": {1: 3, 2: 1}, "e2": {1: 2, 2: 2}})


@pytest.fixture
def uniform(pair_ground):
    return lambda N: UniformMatroid(pair_ground, N)


@pytest.fixture
def frac():
    return Fraction
