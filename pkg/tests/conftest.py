import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call" and not (call.when == "setup" and call.excinfo):
        return
    number, title = marker.args
    ok = call.excinfo is None
    prev = _criteria.get(number, (title, True))
    _criteria[number] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"AC{number} {'PASS' if ok else 'FAIL'}  {title}")
