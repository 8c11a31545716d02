import pytest
from mpmath import mp

# filled by test_acceptance; echoed after the run so the lines are visible
# even when pytest captures stdout
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])


@pytest.fixture
def record_criterion():
    def record(n: int, ok: bool, detail: str = "") -> None:
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        ACCEPTANCE_LINES[n] = line
        print(line)
    return record


@pytest.fixture(autouse=True)
def _digits():
    # comparisons against 30-digit references need the same working precision
    with mp.workdps(30):
        yield
