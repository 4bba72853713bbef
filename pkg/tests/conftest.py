"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

import pytest

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    entry = _CRITERIA.setdefault(n, {"title": title, "status": "PASS", "secs": 0.0, "notes": []})
    if rep.when == "call":
        entry["secs"] += rep.duration
    if rep.failed:
        entry["status"] = "FAIL"
        msg = getattr(getattr(rep.longrepr, "reprcrash", None), "message", "") or ""
        entry["notes"].append(f"{item.name}: {msg.splitlines()[0] if msg else 'error'}")
    elif rep.skipped and entry["status"] == "PASS":
        entry["status"] = "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        tr.write_line(f"criterion {n:2d}: {e['status']}  {e['title']}  ({e['secs']:.1f} s)")
        for note in e["notes"]:
            tr.write_line(f"    {note[:200]}")
