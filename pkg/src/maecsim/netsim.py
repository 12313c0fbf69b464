"""Tick-driven simulation of an event-driven sensor field with mobile base stations.

Sensors are static, connectivity is a unit-disk graph, and every packet takes a
min-hop path to the hop-nearest base station. Energy is charged per packet
(transmit, receive) and per round (control overhead); there is no MAC layer.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from maecsim.comaec import CoopState, StationPacket, comaec_step
from maecsim.geometry import Field, Point, displace
from maecsim.mobility import (
    TICK,
    TIMER_EXPIRED,
    WAITING,
    ControllerConfig,
    DataPacket,
    MoveCommand,
    Phase,
    SourceRecord,
    maec_step,
    periphery_step,
    random_step,
)

STRATEGIES = ("static", "random", "periphery", "maec", "comaec")
MAX_HOTSPOT_TRIES = 1000


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    id: int
    position: Point


@dataclass(frozen=True)
class Hotspot:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ConfigurationError(f"hotspot radius must be positive, got {self.radius}")

    def covers(self, p: Point) -> bool:
        dx, dy = p.x - self.center.x, p.y - self.center.y
        return dx * dx + dy * dy <= self.radius * self.radius


@dataclass(frozen=True)
class ScenarioConfig:
    field: Field = Field(750.0, 750.0)
    node_count: int = 200
    comm_radius: float = 120.0
    initial_energy: float = 10000.0
    n_h: int = 1
    hotspot_radius: float = 60.0
    hotspots: tuple[Hotspot, ...] | None = None  # explicit list overrides n_h/hotspot_radius
    packets_per_source: int = 300
    send_rate: float = 1.0
    strategy: str = "maec"
    n_b: int = 1
    bs_initial_positions: tuple[Point, ...] | str = "random"
    discovery_interval: int = 5
    moving_interval: int = 5
    bs_speed: float | None = None  # meters per tick, None = unlimited
    baseline_step: float = 120.0  # random-walk step and periphery arc per round
    e_tx: float = 1.0
    e_rx: float = 0.7
    e_ctrl: float = 0.01
    seed: int = 0

    def __post_init__(self):
        problems = []
        if self.node_count < 1:
            problems.append(("node_count", "must be >= 1"))
        if not self.comm_radius > 0:
            problems.append(("comm_radius", "must be > 0"))
        if self.n_h < 1:
            problems.append(("n_h", "must be >= 1"))
        if not self.hotspot_radius > 0:
            problems.append(("hotspot_radius", "must be > 0"))
        if self.hotspots is not None and not self.hotspots:
            problems.append(("hotspots", "explicit list must not be empty"))
        if self.packets_per_source < 1:
            problems.append(("packets_per_source", "must be >= 1"))
        if not self.send_rate > 0:
            problems.append(("send_rate", "must be > 0"))
        if self.strategy not in STRATEGIES:
            problems.append(("strategy", f"must be one of {', '.join(STRATEGIES)}"))
        if self.n_b < 1:
            problems.append(("n_b", "must be >= 1"))
        if isinstance(self.bs_initial_positions, str):
            if self.bs_initial_positions != "random":
                problems.append(("bs_initial_positions", "must be 'random' or a list of points"))
        elif len(self.bs_initial_positions) != self.n_b:
            problems.append(("bs_initial_positions", f"needs exactly n_b={self.n_b} points"))
        elif not all(self.field.contains(p) for p in self.bs_initial_positions):
            problems.append(("bs_initial_positions", "points must lie inside the field"))
        if self.discovery_interval < 1:
            problems.append(("discovery_interval", "must be >= 1"))
        if self.moving_interval < 1:
            problems.append(("moving_interval", "must be >= 1"))
        if self.bs_speed is not None and not self.bs_speed > 0:
            problems.append(("bs_speed", "must be > 0 or unlimited"))
        if self.baseline_step < 0:
            problems.append(("baseline_step", "must be >= 0"))
        for name in ("e_tx", "e_rx", "e_ctrl", "initial_energy"):
            if getattr(self, name) < 0:
                problems.append((name, "must be >= 0"))
        if problems:
            key, msg = problems[0]
            err = ConfigurationError(f"{key}: {msg}")
            err.key = key
            raise err

    @property
    def round_length(self) -> int:
        return self.discovery_interval + self.moving_interval

    @property
    def controller(self) -> ControllerConfig:
        return ControllerConfig(self.discovery_interval, self.moving_interval, self.comm_radius)


# --- deployment, topology, routing ---------------------------------------------


def scenario_streams(seed: int) -> dict[str, np.random.Generator]:
    """Independent generators per concern, so e.g. the random walk never shifts the topology."""
    names = ("deploy", "base_stations", "hotspots", "walk", "cluster")
    children = np.random.SeedSequence(seed).spawn(len(names))
    return {n: np.random.default_rng(s) for n, s in zip(names, children)}


def deploy_nodes(count: int, field: Field, rng) -> list[Node]:
    if count < 1:
        raise ConfigurationError("node count must be >= 1")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    xs = rng.uniform(0.0, field.width, count)
    ys = rng.uniform(0.0, field.height, count)
    return [Node(i, Point(float(x), float(y))) for i, (x, y) in enumerate(zip(xs, ys))]


def within(a: Point, b: Point, r: float) -> bool:
    dx, dy = a.x - b.x, a.y - b.y
    return dx * dx + dy * dy <= r * r


def build_graph(nodes: Sequence[Node], r: float) -> list[list[int]]:
    """Unit-disk adjacency: neighbor lists in ascending id order."""
    if not r > 0:
        raise ValueError("communication radius must be positive")
    xy = np.array([[n.position.x, n.position.y] for n in nodes], dtype=float).reshape(-1, 2)
    dx = xy[:, 0][:, None] - xy[:, 0][None, :]
    dy = xy[:, 1][:, None] - xy[:, 1][None, :]
    adj = dx * dx + dy * dy <= r * r
    np.fill_diagonal(adj, False)
    return [np.flatnonzero(row).tolist() for row in adj]


class HopField:
    """BFS hop distances from every node to one base-station position.

    A node within r of the base station has distance 0 (it delivers directly).
    """

    def __init__(self, bs: Point, graph: Sequence[Sequence[int]], nodes: Sequence[Node], r: float):
        self.bs = bs
        self.graph = graph
        dist = [-1] * len(nodes)
        queue = deque()
        for n in nodes:
            if within(n.position, bs, r):
                dist[n.id] = 0
                queue.append(n.id)
        while queue:
            u = queue.popleft()
            for v in graph[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        self.dist = dist

    def reachable(self, node_id: int) -> bool:
        return self.dist[node_id] >= 0

    def path(self, source: int) -> list[int] | None:
        d = self.dist[source]
        if d < 0:
            return None
        path = [source]
        u = source
        while d > 0:
            u = next(v for v in self.graph[u] if self.dist[v] == d - 1)
            path.append(u)
            d -= 1
        return path


def route(source: int, bs: Point, graph, nodes, r: float) -> list[int] | None:
    """Min-hop node path from `source` to a node in range of `bs`; None if unreachable."""
    return HopField(bs, graph, nodes, r).path(source)


# --- energy ------------------------------------------------------------------


@dataclass
class EnergyLedger:
    consumed: list[float]
    sent: list[int]
    forwarded: list[int]
    dropped: list[int]
    rounds: int = 0

    @classmethod
    def empty(cls, n: int) -> EnergyLedger:
        return cls([0.0] * n, [0] * n, [0] * n, [0] * n)

    def expected(self, node_id: int, e_tx: float, e_rx: float, e_ctrl: float) -> float:
        s, f = self.sent[node_id], self.forwarded[node_id]
        return e_tx * (s + f) + e_rx * f + e_ctrl * self.rounds

    def charge_round(self, e_ctrl: float) -> None:
        self.rounds += 1
        for i in range(len(self.consumed)):
            self.consumed[i] += e_ctrl


def charge_path(ledger: EnergyLedger, path: Sequence[int], e_tx: float, e_rx: float) -> None:
    if not path:
        raise ValueError("cannot charge an empty path")
    src = path[0]
    ledger.consumed[src] += e_tx
    ledger.sent[src] += 1
    for relay in path[1:]:
        ledger.consumed[relay] += e_rx + e_tx
        ledger.forwarded[relay] += 1


def charge_drop(ledger: EnergyLedger, source: int, e_tx: float) -> None:
    ledger.consumed[source] += e_tx
    ledger.sent[source] += 1
    ledger.dropped[source] += 1


# --- hotspots -----------------------------------------------------------------


def generate_hotspots(n_h: int, field: Field, bs_positions: Sequence[Point],
                      hotspot_radius: float, rng) -> list[Hotspot]:
    """Discs placed in an annulus around a randomly chosen base station.

    The annulus spans 0.15 to 0.45 of the shorter field side. A disc that
    leaves the field or overlaps an earlier disc is redrawn.
    """
    if n_h < 1:
        raise ConfigurationError("need at least one hotspot")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    side = min(field.width, field.height)
    r_in, r_out = 0.15 * side, 0.45 * side
    spots: list[Hotspot] = []
    for _ in range(n_h):
        for _attempt in range(MAX_HOTSPOT_TRIES):
            anchor = bs_positions[int(rng.integers(len(bs_positions)))]
            rho = math.sqrt(rng.uniform(r_in * r_in, r_out * r_out))
            phi = rng.uniform(0.0, 2.0 * math.pi)
            c = Point(anchor.x + rho * math.cos(phi), anchor.y + rho * math.sin(phi))
            fits = (hotspot_radius <= c.x <= field.width - hotspot_radius
                    and hotspot_radius <= c.y <= field.height - hotspot_radius)
            clear = all(c.dist(s.center) > hotspot_radius + s.radius for s in spots)
            if fits and clear:
                spots.append(Hotspot(c, hotspot_radius))
                break
        else:
            raise ConfigurationError(
                f"could not place hotspot {len(spots) + 1} after {MAX_HOTSPOT_TRIES} tries; "
                "hotspot radius too large for the field"
            )
    return spots


# --- the run loop -------------------------------------------------------------


@dataclass(frozen=True)
class Movement:
    tick: int
    bs_id: int
    angle: float
    distance: float
    position: Point  # after the step


@dataclass
class SimulationReport:
    config: ScenarioConfig
    nodes: list[Node]
    hotspots: list[Hotspot]
    sources: list[int]
    ledger: EnergyLedger
    initial_bs: list[Point]
    trajectories: list[list[Point]]  # [bs][round] position at round start
    movements: list[Movement]
    tick_count: int
    generated: int
    delivered: int

    @property
    def summary(self):
        from maecsim.metrics import summarize

        return summarize(self.ledger, self.config.initial_energy)

    @property
    def dropped(self) -> int:
        return sum(self.ledger.dropped)

    @property
    def final_bs(self) -> list[Point]:
        pos = list(self.initial_bs)
        for m in self.movements:
            pos[m.bs_id] = m.position
        return pos


@dataclass
class _Station:
    id: int
    position: Point
    hops: HopField | None = None
    heading: float | None = None
    remaining: float = 0.0
    budget: int = 0
    maec: object = WAITING

    @property
    def in_motion(self) -> bool:
        return self.budget > 0 and self.remaining > 0


@dataclass
class Topology:
    nodes: list[Node]
    graph: list[list[int]]
    bs_initial: list[Point]
    hotspots: list[Hotspot]
    sources: list[int] = field(default_factory=list)


def build_topology(config: ScenarioConfig) -> Topology:
    """Everything that must be identical across strategies for a given seed."""
    rng = scenario_streams(config.seed)
    nodes = deploy_nodes(config.node_count, config.field, rng["deploy"])
    graph = build_graph(nodes, config.comm_radius)
    if isinstance(config.bs_initial_positions, str):
        xy = rng["base_stations"].uniform(0.0, 1.0, (config.n_b, 2))
        bs = [Point(float(x) * config.field.width, float(y) * config.field.height) for x, y in xy]
    else:
        bs = list(config.bs_initial_positions)
    if config.hotspots is not None:
        spots = list(config.hotspots)
    else:
        spots = generate_hotspots(config.n_h, config.field, bs, config.hotspot_radius, rng["hotspots"])
    sources = [n.id for n in nodes if any(h.covers(n.position) for h in spots)]
    return Topology(nodes, graph, bs, spots, sources)


class _Run:
    def __init__(self, config: ScenarioConfig, topo: Topology):
        self.cfg = config
        self.topo = topo
        self.ctl = config.controller
        self.stations = [_Station(i, p) for i, p in enumerate(topo.bs_initial)]
        self.ledger = EnergyLedger.empty(len(topo.nodes))
        self.trajectories: list[list[Point]] = [[] for _ in self.stations]
        self.movements: list[Movement] = []
        self.coop = CoopState()
        streams = scenario_streams(config.seed)
        self.walk_rng = streams["walk"]
        self.cluster_seed = int(streams["cluster"].integers(2**31))
        self.budget = {s: config.packets_per_source for s in topo.sources}
        self.credit = {s: 0.0 for s in topo.sources}
        self.generated = 0
        self.delivered = 0

    # movement

    def _hops(self, st: _Station) -> HopField:
        if st.hops is None or st.hops.bs != st.position:
            st.hops = HopField(st.position, self.topo.graph, self.topo.nodes, self.cfg.comm_radius)
        return st.hops

    def _command(self, st: _Station, cmd: MoveCommand | None, tick: int) -> None:
        st.heading, st.remaining, st.budget = None, 0.0, 0
        if cmd is None or cmd.direction is None or cmd.distance == 0:
            return
        if self.cfg.bs_speed is None:
            self._step(st, cmd.direction, cmd.distance, tick)
        else:
            st.heading, st.remaining, st.budget = cmd.direction, cmd.distance, self.cfg.moving_interval

    def _step(self, st: _Station, angle: float, dist: float, tick: int) -> None:
        st.position = displace(st.position, angle, dist, self.cfg.field)
        self.movements.append(Movement(tick, st.id, angle, dist, st.position))

    def _advance_motion(self, tick: int) -> None:
        for st in self.stations:
            if st.in_motion:
                d = min(self.cfg.bs_speed, st.remaining)
                self._step(st, st.heading, d, tick)
                st.remaining -= d
                st.budget -= 1
            if not st.in_motion:
                st.heading, st.remaining, st.budget = None, 0.0, 0

    # traffic

    def _deliver(self, src: int, tick: int) -> None:
        best = None
        for st in self.stations:
            hf = self._hops(st)
            if hf.reachable(src):
                key = (hf.dist[src], st.id)
                if best is None or key < best[0]:
                    best = (key, st)
        self.generated += 1
        if best is None:
            charge_drop(self.ledger, src, self.cfg.e_tx)
            return
        st = best[1]
        charge_path(self.ledger, self._hops(st).path(src), self.cfg.e_tx, self.cfg.e_rx)
        self.delivered += 1
        rec = SourceRecord(src, self.topo.nodes[src].position)
        if self.cfg.strategy == "maec":
            st.maec, cmd = maec_step(st.maec, DataPacket(rec), self.ctl, st.position)
        elif self.cfg.strategy == "comaec":
            self.coop, _ = comaec_step(self.coop, StationPacket(st.id, rec), self.ctl,
                                       self._positions(), self.cluster_seed)

    def _emit(self, tick: int) -> None:
        for src in self.topo.sources:
            if self.budget[src] == 0:
                continue
            self.credit[src] += self.cfg.send_rate
            n = min(int(self.credit[src]), self.budget[src])
            self.credit[src] -= n
            self.budget[src] -= n
            for _ in range(n):
                self._deliver(src, tick)

    def _positions(self) -> dict[int, Point]:
        return {st.id: st.position for st in self.stations}

    # controllers

    def _round_start(self, tick: int) -> None:
        self.ledger.charge_round(self.cfg.e_ctrl)
        for st in self.stations:
            self.trajectories[st.id].append(st.position)
        strategy = self.cfg.strategy
        if strategy in ("maec", "comaec", "static"):
            return
        for st in self.stations:
            if strategy == "random":
                cmd = random_step(self.walk_rng, self.cfg.baseline_step)
            else:
                cmd = periphery_step(st.position, self.cfg.field, self.cfg.baseline_step)
            self._command(st, cmd, tick)

    def _clock(self, tick: int) -> None:
        if self.cfg.strategy == "maec":
            for st in self.stations:
                st.maec, _ = maec_step(st.maec, TICK, self.ctl, st.position)
                if st.maec.phase is not Phase.WAITING and st.maec.timer_remaining == 0:
                    st.maec, cmd = maec_step(st.maec, TIMER_EXPIRED, self.ctl, st.position)
                    if cmd is not None:
                        self._command(st, cmd, tick)
        elif self.cfg.strategy == "comaec":
            self.coop, _ = comaec_step(self.coop, TICK, self.ctl, self._positions())
            if self.coop.phase is not Phase.WAITING and self.coop.timer_remaining == 0:
                self.coop, cmds = comaec_step(self.coop, TIMER_EXPIRED, self.ctl,
                                              self._positions(), self.cluster_seed)
                for bs_id, cmd in (cmds or {}).items():
                    self._command(self.stations[bs_id], cmd, tick)

    def _idle(self) -> bool:
        if any(self.budget.values()) or any(st.in_motion for st in self.stations):
            return False
        if self.cfg.strategy == "maec":
            return all(st.maec.phase is Phase.WAITING for st in self.stations)
        if self.cfg.strategy == "comaec":
            return self.coop.phase is Phase.WAITING
        return True

    def run(self, max_ticks: int) -> SimulationReport:
        tick = 0
        while True:
            if tick >= max_ticks:
                raise RuntimeError(f"simulation did not settle within {max_ticks} ticks")
            if tick % self.cfg.round_length == 0:
                self._round_start(tick)
            if self.cfg.bs_speed is not None:
                self._advance_motion(tick)
            self._emit(tick)
            self._clock(tick)
            tick += 1
            if self._idle():
                break
        return SimulationReport(
            config=self.cfg,
            nodes=self.topo.nodes,
            hotspots=self.topo.hotspots,
            sources=self.topo.sources,
            ledger=self.ledger,
            initial_bs=list(self.topo.bs_initial),
            trajectories=self.trajectories,
            movements=self.movements,
            tick_count=tick,
            generated=self.generated,
            delivered=self.delivered,
        )


def run_scenario(config: ScenarioConfig, topology: Topology | None = None,
                 max_ticks: int = 10_000_000) -> SimulationReport:
    topo = topology if topology is not None else build_topology(config)
    return _Run(config, topo).run(max_ticks)
