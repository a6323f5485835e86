import cmath
import math

import pytest

from teichlevel.an_core import ModularParam

B_UNIT_5 = cmath.exp(1j * math.pi / 5)
B_UNIT_6 = cmath.exp(1j * math.pi / 6)


def rel(u, v):
    return abs(u - v) / max(abs(v), 1e-300)


@pytest.fixture
def p08():
    return ModularParam(0.8, 1)


@pytest.fixture(params=[(0.8, 1), (0.8, 3), (B_UNIT_5, 1), (B_UNIT_6, 3)],
                ids=["b0.8-N1", "b0.8-N3", "bpi5-N1", "bpi6-N3"])
def param(request):
    return ModularParam(*request.param)


_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(n, ok, detail); asserts ok."""
    def record(n: int, ok: bool, detail: str):
        _CRITERIA[n] = (bool(ok), detail)
        print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
