import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs for several seconds")
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    _CRITERIA.append((mark.args[0], mark.args[1], call.excinfo is None, call.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, seconds in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  ({seconds:.1f}s)")
