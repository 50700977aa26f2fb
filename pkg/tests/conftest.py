import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("default")

CRITERIA = {
    1: "vector inequalities on random vectors",
    2: "all-pairs exponent identity",
    3: "Hermitian relations and the two-operator limit",
    4: "general-operator relations on unnormalized states",
    5: "ordered multivariance relations",
    6: "symmetric multivariance",
    7: "oscillator three-quadrature anchor",
    8: "squeezing classifier",
    9: "figure grid replay",
    10: "state families",
}
_outcomes: dict[int, list[bool]] = {}


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    if report.when == "call" or report.failed:
        _outcomes.setdefault(crit, []).append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        report.criterion = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(CRITERIA):
        results = _outcomes.get(crit)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {crit:2d} {status:7s} {CRITERIA[crit]}")



@pytest.fixture
def gen():
    return np.random.default_rng(12345)
