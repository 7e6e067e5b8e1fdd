import pytest

from cubicphi.fields import FieldStore

_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_store():
    """Both signs up to 3 * 10^4: enough for |D| <= 1000 inventories."""
    return FieldStore.enumerate(max_pos=30_000, max_neg=30_000)


@pytest.fixture(scope="session")
def example_store():
    """Covers every discriminant in the worked examples, including 81 * 42817."""
    return FieldStore.enumerate(max_pos=1_000_000, max_neg=30_000)
