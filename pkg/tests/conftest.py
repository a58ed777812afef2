from functools import lru_cache

import pytest

from albanese.connext import log_extension
from albanese.exactalg import curve_new

EC = [1, 0, 0, 1]
EC_ALT = [1, -1, 0, 1]
HEC = [1, 0, 0, 0, 0, 1]


@lru_cache(maxsize=None)
def curve(coeffs: tuple):
    return curve_new(list(coeffs))


@lru_cache(maxsize=None)
def extension(coeffs: tuple, level: int):
    return log_extension(curve(coeffs), level)


@pytest.fixture
def ec():
    return curve(tuple(EC))


@pytest.fixture
def hec():
    return curve(tuple(HEC))


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
