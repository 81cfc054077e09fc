import numpy as np
import pytest

from nsgave.bench import bench_one
from nsgave.nsna import SolverConfig
from nsgave.problems import table_specs

_CRITERIA: dict[int, dict] = {}


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    number, title = crit
    entry = _CRITERIA.setdefault(number, {"title": title, "failed": [], "ran": 0})
    if report.when == "call" or report.outcome != "passed":
        if report.when == "call":
            entry["ran"] += 1
        if report.outcome == "failed":
            entry["failed"].append(report.nodeid.split("::")[-1])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        rep.criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        verdict = "FAIL" if e["failed"] or not e["ran"] else "PASS"
        line = f"criterion {number} [PRIMARY] {e['title']}: {verdict}"
        if e["failed"]:
            line += f" ({', '.join(e['failed'])})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def table_runs():
    """All 24 table cells solved once with the default configuration, keyed by spec."""
    cfg = SolverConfig()
    return {spec: bench_one(spec, cfg, repeats=1, keep_report=True) for spec in table_specs()}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
