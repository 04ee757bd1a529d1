import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_GATE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_GATE_KEY] = []


@pytest.fixture
def gate(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    lines = request.config.stash[_GATE_KEY]

    def record(name: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{detail}]" if detail else "")
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_GATE_KEY, [])
    if lines:
        terminalreporter.section("acceptance gate")
        for line in lines:
            terminalreporter.write_line(line)
