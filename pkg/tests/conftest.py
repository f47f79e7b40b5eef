import re
from collections import OrderedDict

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")
_results: "OrderedDict[int, list]" = OrderedDict()


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results.setdefault(int(m.group(1)), []).append((report.nodeid, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        outcomes = _results[num]
        failed = [nid.split("::", 1)[1] for nid, outcome in outcomes if outcome != "passed"]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {num:2d}: {status}"
        if failed:
            line += f"  ({', '.join(failed)})"
        terminalreporter.write_line(line)
