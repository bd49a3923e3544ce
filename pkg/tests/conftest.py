"""Shared pytest configuration.

The only hook here prints one `[acceptance] <test>: PASS/FAIL/SKIP` line per
test in tests/test_acceptance.py, so a full run leaves a compact scoreboard
of the acceptance checks at the end of the log.
"""

import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if "test_acceptance.py" not in item.nodeid:
        return
    status = None
    if report.when == "call":
        status = "PASS" if report.passed else "SKIP" if report.skipped else "FAIL"
    elif report.when == "setup" and not report.passed:
        status = "SKIP" if report.skipped else "FAIL"
    if status is None:
        return
    line = f"[acceptance] {item.name}: {status}"
    terminal = item.config.pluginmanager.get_plugin("terminalreporter")
    if terminal is not None:
        terminal.write_line("")
        terminal.write_line(line)
    else:
        print(line)
