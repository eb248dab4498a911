import numpy as np
import pytest

from wproj.hvec import HomPoint


def random_point(rng, n, m, lo=0.1, hi=2.0):
    def entries(k):
        mag = rng.uniform(lo, hi, size=(2, k)) * rng.choice([-1.0, 1.0], size=(2, k))
        return mag[0] + 1j * mag[1]
    return HomPoint(entries(n), entries(m))


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


# Lines recorded by the acceptance suite, echoed in the terminal summary.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
