"""Acceptance-criterion bookkeeping: one PASS/FAIL line per criterion at the end of the run."""

import pytest

CRITERIA = {
    1: "standard-atmosphere table reproduction",
    2: "density continuity at 11 km",
    3: "geopotential altitude, gravity reduction, sea-level speed of sound",
    4: "adjugate angular-acceleration solve vs linear solve",
    5: "symmetric-airframe reduction vs full form",
    6: "wind-axes equations vs body-axes oracle (and printed-sign witness)",
    7: "moment-coefficient / deflection inverse roundtrip",
    8: "path-angle identities along a 60 s maneuver",
    9: "trim hold for 60 s",
    10: "direct-inverse roundtrip",
    11: "RK4 observed order",
    12: "Euler-rate and wind-angle roundtrips",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if report.when == "call" or report.failed:
        _outcomes.setdefault(n, []).append(report.passed and not report.skipped)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        if n not in _outcomes:
            status = "NOT RUN"
        else:
            status = "PASS" if all(_outcomes[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status:7s} {title}")
