import pytest

# criterion number -> (passed, runtime seconds, budget seconds, summary)
ACCEPTANCE: dict[int, tuple[bool, float, float, str]] = {}


@pytest.fixture
def record_criterion():
    def record(number: int, passed: bool, runtime: float, budget: float, summary: str) -> None:
        ACCEPTANCE[number] = (passed, runtime, budget, summary)
        print(_line(number, *ACCEPTANCE[number]))

    return record


def _line(number, passed, runtime, budget, summary):
    verdict = "PASS" if passed else "FAIL"
    return f"[{verdict}] criterion {number:2d} ({runtime:6.1f}s / {budget:.0f}s)  {summary}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(_line(number, *ACCEPTANCE[number]))
