import random

import pytest
from gmpy2 import mpq
from hypothesis import strategies as st

from cubegeodesic import cube

DEN = 1024


@pytest.fixture
def rng():
    return random.Random(7)


coord = st.integers(min_value=1, max_value=DEN - 1).map(lambda k: mpq(k, DEN))
faces = st.integers(min_value=0, max_value=5)
points = st.builds(lambda f, u, v: cube.point(f, u, v), faces, coord, coord)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
