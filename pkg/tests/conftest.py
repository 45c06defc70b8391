import pytest

_CRITERIA = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    criterion = item.get_closest_marker("criterion")
    if criterion and report.when == "call":
        _CRITERIA.append((criterion.args[0], criterion.args[1], report.passed))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed in sorted(_CRITERIA):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  [{number:>2}] {title}")
