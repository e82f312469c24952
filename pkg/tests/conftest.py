import pytest

CRITERION_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    return CRITERION_LINES.append


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
