from importlib import resources

import pytest

from netdecomp.system import load_system

ACCEPTANCE = []


def fixture_path(name: str) -> str:
    return str(resources.files("netdecomp") / "fixtures" / name)


@pytest.fixture
def net8():
    return load_system(fixture_path("net8.json"))


@pytest.fixture
def chain3():
    return load_system(fixture_path("chain3.json"))


@pytest.fixture
def record():
    """Record one acceptance line; the summary prints them all at the end."""
    def _record(number: int, title: str, ok: bool, detail: str = ""):
        ACCEPTANCE.append((number, title, ok, detail))
        assert ok, f"criterion {number} ({title}) failed: {detail}"
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE):
        line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
