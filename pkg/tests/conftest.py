"""Shared fixtures and the per-criterion acceptance summary."""

from collections import OrderedDict
from fractions import Fraction

import pytest

from ctlf.model import ModelSpec
from ctlf.semantics import Distribution

FAIR = Distribution({"M": Fraction(1, 2), "F": Fraction(1, 2)})

_criteria: "OrderedDict[int, dict]" = OrderedDict()


@pytest.fixture
def toy():
    return ModelSpec.of(("M", "F"), 6)


@pytest.fixture
def fair():
    return FAIR


def pytest_runtest_logreport(report):
    marks = getattr(report, "criterion", None)
    if marks is None:
        return
    number, title = marks
    entry = _criteria.setdefault(number, {"title": title, "failed": [], "ran": 0})
    if report.when == "call" or report.failed:
        entry["ran"] += report.when == "call"
        if report.failed:
            entry["failed"].append(report.nodeid.split("::")[-1])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = (mark.args[0], mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        verdict = "FAIL" if e["failed"] else "PASS"
        line = f"criterion {number}: {verdict}  {e['title']}"
        if e["failed"]:
            line += f"  (failing: {', '.join(e['failed'])})"
        tr.write_line(line)
