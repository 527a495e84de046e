import sys

import pytest

from siegel_lambert.identity import ZERO_TOL
from siegel_lambert.lfunc import SKInstance
from siegel_lambert.zeta import find_zeros


@pytest.fixture(scope="session")
def inst10():
    return SKInstance.build(10, 400)


@pytest.fixture(scope="session")
def zeros100():
    return find_zeros(100, tol=ZERO_TOL)


@pytest.fixture(scope="session")
def zeros20(zeros100):
    return zeros100[:20]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
