import math

import pytest

from maecsim.geometry import Point
from maecsim.mobility import SourceRecord

BS = Point(400.0, 400.0)
R = 100.0

# (sector, hop) for the seven-source worked example: two sources in sector 3,
# four in sector 4, one in sector 5
WORKED_LAYOUT = [(3, 2), (3, 3), (4, 2), (4, 3), (4, 3), (4, 3), (5, 2)]


def place(bs, sector, hop, r, jitter=0.0):
    """A point in the middle of `sector` at distance (hop - 0.5) * r."""
    theta = (2 * sector - 1) * math.pi / 8 + jitter
    d = (hop - 0.5) * r
    return Point(bs.x + d * math.cos(theta), bs.y + d * math.sin(theta))


def worked_example(bs=BS, r=R):
    recs = []
    for k, (sector, hop) in enumerate(WORKED_LAYOUT):
        recs.append(SourceRecord(k, place(bs, sector, hop, r, jitter=0.05 * (k % 3 - 1))))
    return recs


@pytest.fixture
def worked():
    return worked_example()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
