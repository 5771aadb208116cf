import time
from contextlib import contextmanager

import pytest

_LINES: list[str] = []


class CriterionReport:
    """Times one acceptance criterion and records a PASS/FAIL line."""

    @contextmanager
    def __call__(self, label: str, limit: float):
        start = time.perf_counter()
        detail: dict = {}
        try:
            yield detail
        except BaseException as exc:
            elapsed = time.perf_counter() - start
            msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            self._record("FAIL", label, elapsed, limit, detail, msg)
            raise
        elapsed = time.perf_counter() - start
        if elapsed >= limit:
            self._record("FAIL", label, elapsed, limit, detail, "runtime limit exceeded")
            pytest.fail(f"{label}: {elapsed:.2f}s >= {limit}s")
        self._record("PASS", label, elapsed, limit, detail, "")

    @staticmethod
    def _record(status, label, elapsed, limit, detail, msg):
        extra = " ".join(f"{k}={v}" for k, v in detail.items())
        line = f"{status} criterion {label} ({elapsed:.2f}s, limit {limit:g}s) {extra}".rstrip()
        if msg:
            line += f" :: {msg}"
        _LINES.append(line)
        print(line)


@pytest.fixture
def criterion():
    return CriterionReport()


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
