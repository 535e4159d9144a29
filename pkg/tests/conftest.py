import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_")
_results: dict = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or report.failed:
        _results[n] = "PASS" if report.passed and _results.get(n) != "FAIL" else "FAIL"


def pytest_collection_modifyitems(items):
    for item in items:
        m = _CRITERION.search(item.nodeid)
        if m:
            doc = (item.function.__doc__ or "").strip().splitlines()
            item.user_properties.append(("criterion", doc[0] if doc else item.name))
            _titles[int(m.group(1))] = doc[0] if doc else item.name


_titles: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_titles):
        status = _results.get(n, "NOT RUN")
        terminalreporter.write_line(f"criterion {n}: {status}  {_titles[n]}")
