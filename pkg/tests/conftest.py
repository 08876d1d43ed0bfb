import numpy as np
import pytest
from hypothesis import settings

from loccspan.linalg import haar_orthonormal_columns
from loccspan.stateset import StateSet

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")


def random_set(dims, n_states, seed) -> StateSet:
    frame = haar_orthonormal_columns(int(np.prod(dims)), n_states, np.random.default_rng(seed))
    return StateSet(dims, frame.T)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name, title): acceptance criterion reported in the summary")


_results: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    name, title = mark.args
    entry = _results.setdefault(name, {"title": title, "ok": True, "ran": False})
    if report.when == "call":
        entry["ran"] = True
    if report.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_results, key=lambda k: int(k[2:])):
        entry = _results[name]
        status = "PASS" if entry["ok"] and entry["ran"] else ("SKIP" if entry["ok"] else "FAIL")
        terminalreporter.write_line(f"{status} {name}: {entry['title']}")
