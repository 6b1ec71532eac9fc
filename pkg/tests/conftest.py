import time
from contextlib import contextmanager

import pytest

_LINES = []


class Criterion:
    """Times one acceptance criterion and records a PASS/FAIL line for it."""

    def __init__(self):
        self.detail = ""

    @contextmanager
    def __call__(self, label, limit):
        start = time.perf_counter()
        ok = False
        try:
            yield self
            elapsed = time.perf_counter() - start
            assert elapsed < limit, f"took {elapsed:.1f} s, limit {limit} s"
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            extra = f"; {self.detail}" if self.detail else ""
            _LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}  "
                          f"({elapsed:.2f} s, limit {limit} s{extra})")
            self.detail = ""


@pytest.fixture
def criterion():
    return Criterion()


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
