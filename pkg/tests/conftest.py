import numpy as np
import pytest

from corrwork import instances


@pytest.fixture(params=sorted(instances.FIXTURES))
def any_fixture(request):
    return instances.fixture(request.param)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240611))


ACCEPTANCE_LINES: dict = {}


def record_criterion(number: int, ok: bool, detail: str):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
