import pytest

REPORT = []


@pytest.fixture
def acceptance():
    def record(number, passed, detail):
        REPORT.append((number, passed, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(REPORT, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{number:2d}] {'PASS' if passed else 'FAIL'}  {detail}")
