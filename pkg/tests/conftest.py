import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from modgauss.rng import RandomStream  # noqa: E402


@pytest.fixture
def stream():
    return RandomStream(20240611)


ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    lines = request.config.stash.setdefault(ACCEPTANCE_LINES, [])

    def record(label: str, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'} criterion {label}: {detail}"
        lines.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
