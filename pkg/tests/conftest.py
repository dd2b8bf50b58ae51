from __future__ import annotations

import pytest

# criterion number -> list of (passed, detail), one entry per clause test
CRITERIA: dict[int, list[tuple[bool, str]]] = {}


@pytest.fixture
def record():
    def _record(number: int, passed: bool, detail: str) -> None:
        CRITERIA.setdefault(number, []).append((passed, detail))

    return _record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        clauses = CRITERIA[number]
        failed = [d for ok, d in clauses if not ok]
        detail = "; ".join(failed) if failed else "; ".join(d for _, d in clauses)
        terminalreporter.write_line(f"criterion {number:>2}: {'FAIL' if failed else 'PASS'}  {detail}")
