"""Shared fixtures: the acceptance-criterion reporter.

Acceptance tests wrap their body in `criterion("name")`; one PASS/FAIL line
per criterion is printed in a summary section at the end of the run,
regardless of output capturing.
"""

import pytest

_RESULTS: list[tuple[str, bool]] = []


class _Criterion:
    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        _RESULTS.append((self.name, exc_type is None))
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in _RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}")
