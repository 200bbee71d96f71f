import time
from contextlib import contextmanager

import pytest

_RESULTS: list[str] = []


class _Criterion:
    def __init__(self):
        self.notes: list[str] = []

    def note(self, text: str):
        self.notes.append(text)


@pytest.fixture
def criterion():
    """Run an acceptance criterion, time it and record one PASS/FAIL line."""

    @contextmanager
    def run(label: str, limit_seconds: float):
        c = _Criterion()
        start = time.perf_counter()
        status = "FAIL"
        try:
            yield c
            elapsed = time.perf_counter() - start
            assert elapsed < limit_seconds, f"took {elapsed:.1f}s, limit {limit_seconds}s"
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            detail = "; ".join(c.notes)
            line = f"{status} {label} ({elapsed:.2f}s / {limit_seconds:g}s)" + (f": {detail}" if detail else "")
            _RESULTS.append(line)
            print(line)

    return run


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in _RESULTS:
            terminalreporter.write_line(line)
