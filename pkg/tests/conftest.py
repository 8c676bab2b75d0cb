import numpy as np
import pytest

from abelfrac.fracops import SampledFunction
from abelfrac.quadrature import Grid

ACCEPTANCE_LINES = []


@pytest.fixture
def grid513():
    return Grid(1.0, 513)


@pytest.fixture
def sample():
    def make(fn, grid):
        return SampledFunction(grid, np.broadcast_to(fn(grid.nodes), (grid.n,)))

    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
