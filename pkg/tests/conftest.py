"""Shared fixtures plus a terminal summary for the acceptance criteria."""

from __future__ import annotations

import pytest

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def quat8():
    from verba.groups import builtin_group

    return builtin_group("quat:8")


@pytest.fixture(scope="session")
def sym3():
    from verba.groups import builtin_group

    return builtin_group("sym:3")


@pytest.fixture(scope="session")
def sym4():
    from verba.groups import builtin_group

    return builtin_group("sym:4")


@pytest.fixture(scope="session")
def alt4():
    from verba.groups import builtin_group

    return builtin_group("alt:4")
