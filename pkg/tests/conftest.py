import time

import pytest

from scarf2.closed_forms import Parameterization, to_scarf_params
from scarf2.oracle import OracleConfig

SQRT2 = 2.0 ** 0.5


@pytest.fixture(scope="session")
def cfg():
    return OracleConfig()


@pytest.fixture(scope="session")
def p1():
    return Parameterization.p1(1.0, 0.5)


@pytest.fixture(scope="session")
def p2():
    return Parameterization.p2(SQRT2)


@pytest.fixture(scope="session")
def p4():
    return Parameterization.p4(2.0, 5.0)


@pytest.fixture(scope="session")
def params_p4(p4):
    return to_scarf_params(p4)


SUITE_BUDGET_S = 180.0
_START = {}


def pytest_sessionstart(session):
    _START["t"] = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
    elapsed = time.perf_counter() - _START["t"]
    ok = elapsed < SUITE_BUDGET_S
    terminalreporter.write_line(
        f"{'PASS' if ok else 'FAIL'} criterion 8 (runtime): this pytest session took "
        f"{elapsed:.1f} s (< {SUITE_BUDGET_S:.0f} s)")
