import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one ``criterion N: PASS|FAIL detail`` line for the summary."""

    def record(number, title, passed, detail=""):
        line = f"criterion {number:>2} {title}: {'PASS' if passed else 'FAIL'}"
        ACCEPTANCE_LINES.append(f"{line}  {detail}".rstrip())
        print(ACCEPTANCE_LINES[-1])

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
