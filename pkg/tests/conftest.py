import math

import pytest
from hypothesis import HealthCheck, settings

from pardelaunay.geometry import ShapeSpec

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SHAPES = [(1.0, math.pi / 2), (2.0, math.pi / 3), (4.0, 1.0), (1.5, 0.4), (3.0, 1.3)]


@pytest.fixture(params=SHAPES, ids=lambda s: f"A{s[0]:g}-t{s[1]:.3f}")
def shape(request):
    return ShapeSpec(*request.param)


_LOG = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    lines = request.config.stash.setdefault(_LOG, [])

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LOG, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
