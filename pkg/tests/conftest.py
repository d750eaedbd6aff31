from __future__ import annotations

import pytest

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "acceptance(id, title): a primary acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item: pytest.Item, call: pytest.CallInfo):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    report = outcome.get_result()
    cid, title = marker.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        if hasattr(report, "wasxfail"):
            verdict = "XFAIL"
        else:
            verdict = "PASS" if report.passed else "FAIL"
        _ACCEPTANCE[cid] = (verdict, title)


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_ACCEPTANCE):
        verdict, title = _ACCEPTANCE[cid]
        terminalreporter.write_line(f"{verdict} {cid} {title}")
