import math
import warnings

import pytest

from circsim import filters, network

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def ideal_filter():
    return filters.BrickWall(900e6, 40e6, 20e-9)


@pytest.fixture
def lossy_filter():
    return filters.BrickWall(900e6, 40e6, 20e-9, il_db=0.9)


def ideal_switches():
    return dict(ron_ohm=1e-6, roff_ohm=1e12)


def quiet(fn, *args, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fn(*args, **kw)


def db(x):
    return -math.inf if abs(x) == 0 else 20 * math.log10(abs(x))
