import os
from pathlib import Path

import numpy as np
import pytest

from timebell import EventSeries

ROOT = Path(__file__).resolve().parents[1]


def ecgn_path():
    """The original record, if a copy is available locally."""
    env = os.environ.get("TIMEBELL_ECGN")
    for cand in ([Path(env)] if env else []) + [ROOT / "ecgn.txt", ROOT / "tests" / "data" / "ecgn.txt"]:
        if cand.is_file():
            return cand
    return None


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def naive_u(times, start, end):
    """Linear-scan reference for window occupancy."""
    for t in times:
        if start < t <= end:
            return 1
    return -1


def random_series(rng, n, span):
    times = np.unique(rng.integers(0, span, size=n))
    return EventSeries(times)


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, text): acceptance criterion")


def pytest_runtest_logreport(report):
    item_marker = getattr(report, "_criterion", None)
    if item_marker is None:
        return
    if report.when == "call" or report.outcome in ("failed", "skipped"):
        prev = _CRITERIA.get(report.nodeid)
        if prev is None or prev[2] == "PASS":
            outcome = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
            _CRITERIA[report.nodeid] = (*item_marker, outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result()._criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num, text, outcome in sorted(_CRITERIA.values(), key=lambda v: str(v[0])):
        terminalreporter.write_line(f"[{outcome}] criterion {num}: {text}")
