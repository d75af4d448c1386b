import numpy as np
import pytest

CRITERIA: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


class FixedRng:
    """Stand-in rng whose ``uniform``/``random`` return preset values."""

    def __init__(self, uniform=0.0, integers=0, random=0.0):
        self._u = uniform
        self._i = integers
        self._r = random

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._u

    def integers(self, *args, **kw):
        return self._i

    def random(self, size=None):
        return self._r


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
