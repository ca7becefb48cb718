import pytest

from contractnet import catalog

_criteria = []


@pytest.fixture
def cyc3():
    return catalog.cyc3()


@pytest.fixture
def marr():
    return catalog.marriage2()


@pytest.fixture
def split2():
    return catalog.split2()


@pytest.fixture
def record_criterion():
    def record(number, passed, detail):
        _criteria.append((number, passed, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_criteria):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
