from __future__ import annotations

import re

_RESULTS: dict = {}
_CRITERION = re.compile(r"test_criterion_(\d+)_")


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m or "test_acceptance" not in report.nodeid:
        return
    n = int(m.group(1))
    if report.when == "call" or report.failed:
        prev = _RESULTS.get(n, (True, 0.0))
        _RESULTS[n] = (prev[0] and report.passed, prev[1] + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        ok, secs = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({secs:.2f}s)")
