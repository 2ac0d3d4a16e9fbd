"""Shared fixtures; acceptance verdicts are echoed in the terminal summary."""

from __future__ import annotations

import pytest

_VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_VERDICTS] = []


@pytest.fixture
def verdict(request):
    """Record one acceptance line, then assert it."""
    lines = request.config.stash[_VERDICTS]

    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title}"
        if detail:
            line += f" [{detail}]"
        lines.append(line)
        print(line)
        assert ok, line

    return record


@pytest.fixture
def report(request):
    """Record a reported-only acceptance line (never fails)."""
    lines = request.config.stash[_VERDICTS]

    def record(number: int, title: str, detail: str) -> None:
        line = f"REPORT criterion {number:>2}: {title} [{detail}]"
        lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
