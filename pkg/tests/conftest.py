"""Prints one PASS/FAIL line per acceptance criterion after the run."""

_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "acceptance" not in report.keywords or "::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        _criteria.setdefault(name, "PASS" if report.passed else "FAIL")
        if not report.passed:
            _criteria[name] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        terminalreporter.write_line(f"{_criteria[name]}  {name}")
