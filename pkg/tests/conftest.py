import time
from contextlib import contextmanager

import pytest

_RESULTS = {}


class _Criterion:
    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.detail = ""

    @contextmanager
    def timed(self, budget_s):
        t0 = time.perf_counter()
        yield
        elapsed = time.perf_counter() - t0
        self.detail += f" [{elapsed:.2f}s of {budget_s}s]"
        assert elapsed < budget_s, f"criterion {self.number} took {elapsed:.2f}s (budget {budget_s}s)"


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; a summary line per criterion is printed at the end."""
    marker = request.node.get_closest_marker("criterion")
    number, title = marker.args
    crit = _Criterion(number, title)
    yield crit
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    _RESULTS[number] = (title, passed, crit.detail)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, passed, detail = _RESULTS[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {title}{detail}")
