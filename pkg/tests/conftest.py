import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ssqa.model import IsingModel  # noqa: E402


def random_ising(rng, n, scale=1.0, integer=False):
    if integer:
        h = rng.integers(-3, 4, n).astype(float)
        J = np.triu(rng.integers(-2, 3, (n, n)).astype(float), 1)
    else:
        h = rng.normal(0, scale, n)
        J = np.triu(rng.normal(0, scale, (n, n)), 1)
    return IsingModel(h, J + J.T, float(rng.normal()))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import REPORT

    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
