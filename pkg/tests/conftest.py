"""Collects the acceptance verdicts and prints one line per criterion at the end of the run."""
from __future__ import annotations

import pytest

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def verdict():
    """Record the outcome of an acceptance criterion: verdict(number, title, ok, detail)."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE[number] = (title, bool(ok), detail)
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}  {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number}. {title}  {detail}")
