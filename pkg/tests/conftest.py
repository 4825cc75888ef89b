import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from mdpcodes import GF, StateSpace  # noqa: E402

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or rep.failed:
        _CRITERIA[number] = (title, "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}: {title}")


@pytest.fixture
def gf3():
    return GF(3)


@pytest.fixture
def example(gf3):
    """The (2,1,1) MDP code over GF(3) with Markov blocks (1, 1, 2)."""
    return StateSpace.from_lists(gf3, [[2]], [[1]], [[1]], [[1]])


@pytest.fixture
def bad_gf2():
    """(2,1,1) code over GF(2) whose Markov blocks are (1, 1, 1)."""
    return StateSpace.from_lists(GF(2), [[1]], [[1]], [[1]], [[1]])
