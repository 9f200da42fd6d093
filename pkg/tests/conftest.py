import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[report.nodeid] = report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")

    def number(nodeid):
        return int(nodeid.split("test_criterion_")[1].split("_")[0])
    for nodeid in sorted(_criteria, key=number):
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if _criteria[nodeid] else 'FAIL'} {name}")
