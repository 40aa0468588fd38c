import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, title): acceptance criterion this test checks")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" and not report.failed:
        return
    cid, title = mark.args
    entry = _criteria.setdefault(cid, {"title": title, "failed": [], "ran": 0})
    if report.when == "call":
        entry["ran"] += 1
    if report.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    key = lambda c: (int("".join(ch for ch in c if ch.isdigit())), c)
    for cid in sorted(_criteria, key=key):
        e = _criteria[cid]
        status = "FAIL" if e["failed"] else "PASS"
        line = f"{status} criterion {cid}: {e['title']}"
        if e["failed"]:
            line += f"  [failed: {', '.join(e['failed'])}]"
        tr.write_line(line)
    passed = sum(not e["failed"] for e in _criteria.values())
    tr.write_line(f"{passed}/{len(_criteria)} criteria passed")
