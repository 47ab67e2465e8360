import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# Reference 5 x 10 sign matrix (entries +-1/sqrt(5)) used in the flipping example.
FLIP_EXAMPLE_ROWS = (
    "++++-++++-",
    "+-+++---+-",
    "++++++++-+",
    "---+-++---",
    "-++--+----",
)
FLIP_EXAMPLE_PATTERN = "+-+--++-++"


def flip_example_matrix():
    signs = np.array([[1.0 if c == "+" else -1.0 for c in row] for row in FLIP_EXAMPLE_ROWS])
    return signs / np.sqrt(5)


@pytest.fixture
def flip_example():
    from frame_forge import Frame

    return Frame(flip_example_matrix(), {"family": "flip-example"})


def pytest_collection_modifyitems(config, items):
    if os.environ.get("FRAME_FORGE_OFFLINE") == "1":
        return
    skip = pytest.mark.skip(reason="offline run; set FRAME_FORGE_OFFLINE=1")
    for item in items:
        if "offline" in item.keywords:
            item.add_marker(skip)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config._criterion_outcomes = {}


def pytest_runtest_logreport(report):
    crit = getattr(report, "_criterion", None)
    if crit is None:
        return
    outcomes = report.config_outcomes
    if report.when == "call" or report.outcome == "failed":
        ok = report.outcome == "passed"
        prev = outcomes.get(crit)
        outcomes[crit] = ok if prev is None else prev and ok
    elif report.skipped:
        outcomes.setdefault(crit, None)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        rep = outcome.get_result()
        rep._criterion = marker.args[0]
        rep.config_outcomes = item.config._criterion_outcomes


def pytest_terminal_summary(terminalreporter, config):
    outcomes = getattr(config, "_criterion_outcomes", {})
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(outcomes):
        state = outcomes[crit]
        label = "SKIP" if state is None else ("PASS" if state else "FAIL")
        terminalreporter.write_line(f"criterion {crit}: {label}")
