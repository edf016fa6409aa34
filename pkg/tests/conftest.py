from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qmm import dsl  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "passed": 0, "failed": []})
    if report.failed:
        entry["failed"].append(item.name)
    elif report.when == "call" and report.passed:
        entry["passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "FAIL" if entry["failed"] or not entry["passed"] else "PASS"
        detail = f" ({', '.join(entry['failed'])})" if entry["failed"] else ""
        terminalreporter.write_line(f"criterion {number}: {status} - {entry['title']}{detail}")


@pytest.fixture(scope="session")
def corpus():
    return dsl.parse(dsl.read_data("usability-highlevel.qmm"), prelude=True)


@pytest.fixture(scope="session")
def iso():
    return dsl.parse(dsl.read_data("iso15005-demo.qmm"), prelude=True)


@pytest.fixture(scope="session")
def iso_assessment():
    return dsl.parse_assessment(dsl.read_data("iso15005-demo.qma"))


@pytest.fixture(scope="session")
def prelude_only():
    return dsl.parse('model "Empty"', prelude=True)
