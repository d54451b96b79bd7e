import sys
from collections import OrderedDict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: "OrderedDict[int, dict]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion this test checks")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            n, title = mark.args
            entry = _CRITERIA.setdefault(n, {"title": title, "passed": 0, "failed": [], "total": 0})
            entry["total"] += 1
            item.keywords[f"criterion_{n}"] = True


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for n, entry in _CRITERIA.items():
        if report.keywords.get(f"criterion_{n}"):
            if report.passed:
                entry["passed"] += 1
            else:
                entry["failed"].append(report.nodeid.split("::")[-1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    ran = {n: e for n, e in _CRITERIA.items() if e["passed"] or e["failed"]}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for n, e in sorted(ran.items()):
        status = "PASS" if not e["failed"] and e["passed"] == e["total"] else "FAIL"
        line = f"criterion {n:2d} {status}  {e['title']}  ({e['passed']}/{e['total']} checks)"
        if e["failed"]:
            line += "  failing: " + ", ".join(e["failed"])
        terminalreporter.write_line(line)
