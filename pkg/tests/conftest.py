import pytest

from cyclicdiff import BACKEND

# filled by test_acceptance: (criterion id, passed, detail)
ACCEPTANCE_RESULTS = []


@pytest.fixture
def acceptance():
    def record(criterion, passed, detail):
        ACCEPTANCE_RESULTS.append((criterion, bool(passed), detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(
            f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}")
    terminalreporter.write_line(f"(kernel backend: {BACKEND})")
