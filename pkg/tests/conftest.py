import sys

import pytest

from helpers import clean, noisy, unit4


@pytest.fixture
def F_UNIT4():
    return unit4()


@pytest.fixture
def F_CLEAN():
    return clean()


@pytest.fixture
def F_NOISY():
    return noisy()


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
