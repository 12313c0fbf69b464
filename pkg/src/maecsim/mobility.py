"""Base-station movement controllers.

The hotspot-seeking controller aggregates the sources heard during a discovery
window into eight octants around the base station, then derives a heading from
the hop-weighted octant imbalance and a travel distance from the mean excess
hop count. Baseline controllers (static, random walk, periphery circling) share
the same MoveCommand output type.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, replace
from typing import Iterable, Sequence, Union

import numpy as np

from maecsim.geometry import (
    TWO_PI,
    Field,
    Point,
    normalize_angle,
    physical_hops,
    sector_center_angle,
    sector_of,
)


@dataclass(frozen=True)
class SourceRecord:
    node_id: int
    location: Point


@dataclass(frozen=True)
class MoveCommand:
    """Heading (radians in [0, 2pi)) and travel distance. direction=None means hold position."""

    direction: float | None
    distance: float

    def __post_init__(self):
        if self.distance < 0:
            raise ValueError(f"distance must be non-negative, got {self.distance}")
        if self.direction is not None and not (0.0 <= self.direction < TWO_PI):
            raise ValueError(f"direction must be normalized to [0, 2pi), got {self.direction}")


HOLD = MoveCommand(None, 0.0)


@dataclass(frozen=True)
class SectorAggregate:
    counts: tuple[int, ...]  # index 0 is sector 1
    mean_hops: tuple[float, ...]
    h_avg: float
    hops: tuple[int, ...]  # hop count of every aggregated record, in input order

    @property
    def total(self) -> int:
        return sum(self.counts)

    def n(self, i: int) -> int:
        return self.counts[i - 1]

    def h(self, i: int) -> float:
        return self.mean_hops[i - 1]


def aggregate_sources(records: Iterable[SourceRecord], bs: Point, r: float) -> SectorAggregate:
    hop_sums = [0] * 8
    counts = [0] * 8
    hops = []
    for rec in records:
        hop = physical_hops(bs.dist(rec.location), r)
        sector = sector_of(bs, rec.location)
        if hop == 0 or sector is None:
            continue
        counts[sector - 1] += 1
        hop_sums[sector - 1] += hop
        hops.append(hop)
    mean_hops = tuple(s / n if n else 0.0 for s, n in zip(hop_sums, counts))
    total = sum(counts)
    h_avg = sum(hops) / total if total else 0.0
    return SectorAggregate(tuple(counts), mean_hops, h_avg, tuple(hops))


def direction_normalizer(agg: SectorAggregate) -> float:
    """h_avg times the summed count imbalance of the four opposite-sector pairs."""
    return agg.h_avg * sum(abs(agg.n(i) - agg.n(i + 4)) for i in range(1, 5))


def compute_direction(agg: SectorAggregate) -> float | None:
    """Heading from the hop-weighted pull of each opposite-sector pair.

    For each pair (i, i+4) the heavier side contributes its weight excess times
    its sector-center angle. Angles are averaged as scalars, not as vectors, and
    the quotient is wrapped into [0, 2pi). None means the pulls cancel out.
    """
    norm = direction_normalizer(agg)
    if norm == 0:
        return None
    total = 0.0
    for i in range(1, 5):
        delta = agg.h(i) * agg.n(i) - agg.h(i + 4) * agg.n(i + 4)
        if delta > 0:
            total += delta * sector_center_angle(i)
        elif delta < 0:
            total += -delta * sector_center_angle(i + 4)
    return normalize_angle(total / norm)


def compute_distance(hops: Iterable[int], r: float) -> float:
    by_hop = Counter(hops)
    n = sum(by_hop.values())
    if n == 0:
        return 0.0
    if min(by_hop) < 1:
        raise ValueError("hop counts must be >= 1")
    return sum((i - 1) * k * r for i, k in sorted(by_hop.items())) / n


def plan_move(records: Iterable[SourceRecord], bs: Point, r: float) -> MoveCommand:
    """Direction and distance for one batch of sources; both derived from the same records."""
    agg = aggregate_sources(records, bs, r)
    direction = compute_direction(agg)
    if direction is None:
        return HOLD
    return MoveCommand(direction, compute_distance(agg.hops, r))


# --- hotspot-seeking state machine ------------------------------------------


class Phase(enum.Enum):
    WAITING = "waiting"
    DISCOVERY = "discovery"
    MOVING = "moving"


@dataclass(frozen=True)
class DataPacket:
    record: SourceRecord


@dataclass(frozen=True)
class Tick:
    pass


@dataclass(frozen=True)
class TimerExpired:
    pass


Event = Union[DataPacket, Tick, TimerExpired]
TICK = Tick()
TIMER_EXPIRED = TimerExpired()


@dataclass(frozen=True)
class ControllerConfig:
    discovery_interval: int
    moving_interval: int
    comm_radius: float

    def __post_init__(self):
        if self.discovery_interval < 1 or self.moving_interval < 1:
            raise ValueError("phase intervals must be >= 1 tick")
        if not self.comm_radius > 0:
            raise ValueError("communication radius must be positive")


@dataclass(frozen=True)
class ControllerState:
    phase: Phase = Phase.WAITING
    timer_remaining: int = 0
    sources: tuple[SourceRecord, ...] = ()
    pending: MoveCommand | None = None

    def __post_init__(self):
        if self.timer_remaining < 0:
            raise ValueError("timer_remaining must be >= 0")
        if self.phase is Phase.WAITING and (self.sources or self.pending is not None):
            raise ValueError("waiting state carries no sources and no pending move")
        if self.phase is Phase.MOVING and self.pending is None:
            raise ValueError("moving state requires a pending move")

    def knows(self, node_id: int) -> bool:
        return any(s.node_id == node_id for s in self.sources)


WAITING = ControllerState()


def maec_step(
    state: ControllerState, event: Event, cfg: ControllerConfig, bs: Point
) -> tuple[ControllerState, MoveCommand | None]:
    """Advance the three-phase controller by one event.

    Returns the new state and, only on the Discovery -> Moving transition, the
    move to execute. Events that mean nothing in the current phase are ignored.
    """
    phase = state.phase
    if isinstance(event, Tick):
        if phase is Phase.WAITING:
            return state, None
        return replace(state, timer_remaining=max(0, state.timer_remaining - 1)), None

    if isinstance(event, DataPacket):
        if phase is Phase.WAITING:
            return ControllerState(Phase.DISCOVERY, cfg.discovery_interval, (event.record,)), None
        if phase is Phase.DISCOVERY and not state.knows(event.record.node_id):
            return replace(state, sources=state.sources + (event.record,)), None
        return state, None

    if isinstance(event, TimerExpired):
        if phase is Phase.DISCOVERY:
            if not state.sources:
                return WAITING, None
            cmd = plan_move(state.sources, bs, cfg.comm_radius)
            return ControllerState(Phase.MOVING, cfg.moving_interval, (), cmd), cmd
        if phase is Phase.MOVING:
            return ControllerState(Phase.DISCOVERY, cfg.discovery_interval), None
        return state, None

    raise TypeError(f"unknown event {event!r}")


# --- baselines ----------------------------------------------------------------


def static_step() -> MoveCommand:
    return MoveCommand(0.0, 0.0)


def random_step(rng: np.random.Generator, step_len: float) -> MoveCommand:
    if step_len < 0:
        raise ValueError("step length must be non-negative")
    return MoveCommand(normalize_angle(float(rng.uniform(0.0, TWO_PI))), float(step_len))


PERIPHERY_TOL = 1e-9


def periphery_step(bs: Point, field: Field, arc_len: float) -> MoveCommand:
    """Counterclockwise step along the field's inscribed circle.

    A base station off the circle is first sent radially onto it; that step
    consumes the whole command. From the exact center the projection heads +x.
    """
    if arc_len < 0:
        raise ValueError("arc length must be non-negative")
    c = field.center
    radius = min(field.width, field.height) / 2.0
    off = bs.dist(c)
    if abs(off - radius) > PERIPHERY_TOL * radius:
        if off == 0:
            return MoveCommand(0.0, radius)
        heading = math.atan2(c.y - bs.y, c.x - bs.x) if off > radius else math.atan2(bs.y - c.y, bs.x - c.x)
        return MoveCommand(normalize_angle(heading), abs(off - radius))
    if arc_len == 0:
        return MoveCommand(0.0, 0.0)
    phi = math.atan2(bs.y - c.y, bs.x - c.x)
    phi_next = phi + arc_len / radius
    target = Point(c.x + radius * math.cos(phi_next), c.y + radius * math.sin(phi_next))
    return MoveCommand(
        normalize_angle(math.atan2(target.y - bs.y, target.x - bs.x)), bs.dist(target)
    )


def phase_trace(events: Sequence[Event], cfg: ControllerConfig, bs: Point) -> list[Phase]:
    """Phases visited while feeding `events` from Waiting, collapsing repeats."""
    state = WAITING
    trace = [state.phase]
    for ev in events:
        state, _ = maec_step(state, ev, cfg, bs)
        if state.phase is not trace[-1]:
            trace.append(state.phase)
    return trace
