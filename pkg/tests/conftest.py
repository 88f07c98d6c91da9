import math
import sys

import pytest

from polbjj.model import make_params

FIG2 = {
    "curve1": (2.08475, -0.97, 0.0),
    "curve2": (0.15, -0.5, math.pi),
    "curve3": (2.08475, 0.9, math.pi),
    "curve4": (1.0, -0.259, 0.0),
}


@pytest.fixture
def balanced():
    """Lambda = -2, beta = 1: zero effective energy difference."""
    return make_params(-2.0, 1.0)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
