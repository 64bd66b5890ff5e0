import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for the acceptance summary and print it."""

    def record(number, ok, elapsed, limit, detail):
        ok = bool(ok) and elapsed < limit
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s / {limit:g}s) {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
