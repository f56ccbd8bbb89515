import random

import pytest

from omega_betti.parser import parse_polynomial


@pytest.fixture
def rng():
    return random.Random(1234)


def P(text, variables=("x", "y")):
    return parse_polynomial(text, variables)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
