"""Cooperative control of several base stations.

Each round the lists heard by every base station are pooled at an elected
head, the sources are clustered into one group per base station, groups are
matched to base stations by total travel distance, and each base station then
plans its own move from its group alone.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from maecsim.geometry import Point
from maecsim.mobility import (
    HOLD,
    ControllerConfig,
    MoveCommand,
    Phase,
    SourceRecord,
    Tick,
    TimerExpired,
    plan_move,
)

KMEANS_MAX_ITER = 100


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class SourceGroup:
    members: tuple[SourceRecord, ...]
    centroid: Point

    @classmethod
    def of(cls, members: Sequence[SourceRecord]) -> SourceGroup:
        if not members:
            raise ValueError("a source group needs at least one member")
        n = len(members)
        cx = math.fsum(m.location.x for m in members) / n
        cy = math.fsum(m.location.y for m in members) / n
        return cls(tuple(members), Point(cx, cy))


def elect_head(round_index: int, ids: Sequence[int]) -> int:
    if not ids:
        raise ConfigurationError("cannot elect a head from an empty base-station set")
    ordered = sorted(ids)
    return ordered[round_index % len(ordered)]


def dedup_union(lists: Mapping[int, Sequence[SourceRecord]]) -> list[SourceRecord]:
    """Pool per-station lists in ascending station order, first report of each node wins."""
    seen = set()
    out = []
    for bs_id in sorted(lists):
        for rec in lists[bs_id]:
            if rec.node_id not in seen:
                seen.add(rec.node_id)
                out.append(rec)
    return out


def _kmeans_labels(xy: np.ndarray, k: int, seed: int) -> np.ndarray:
    n = len(xy)
    rng = np.random.default_rng(seed)
    centers_idx = [int(rng.integers(n))]
    nearest = np.sum((xy - xy[centers_idx[0]]) ** 2, axis=1)
    while len(centers_idx) < k:
        nxt = int(np.argmax(nearest))  # first index on ties
        centers_idx.append(nxt)
        nearest = np.minimum(nearest, np.sum((xy - xy[nxt]) ** 2, axis=1))
    centers = xy[centers_idx].copy()

    labels = None
    for _ in range(KMEANS_MAX_ITER):
        d2 = ((xy[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(d2, axis=1)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k):
            mask = labels == j
            if mask.any():
                centers[j] = xy[mask].mean(axis=0)
    return labels


def cluster_sources(records: Sequence[SourceRecord], k: int, seed: int = 0) -> list[SourceGroup]:
    """Lloyd k-means on source locations with farthest-point seeding.

    The first center is a seeded random record, each further one the record
    farthest from all chosen centers. Returns at most min(k, len(records))
    groups, ordered by their first member's position in `records`.
    """
    if k < 1:
        raise ConfigurationError(f"cluster count must be >= 1, got {k}")
    if not records:
        return []
    k = min(k, len(records))
    xy = np.array([[r.location.x, r.location.y] for r in records], dtype=float)
    labels = _kmeans_labels(xy, k, seed)
    buckets: dict[int, list[SourceRecord]] = {}
    for rec, lab in zip(records, labels):
        buckets.setdefault(int(lab), []).append(rec)
    return [SourceGroup.of(members) for members in buckets.values()]


def _merge_closest(groups: list[SourceGroup]) -> list[SourceGroup]:
    best = None
    for a, b in itertools.combinations(range(len(groups)), 2):
        d = groups[a].centroid.dist(groups[b].centroid)
        if best is None or d < best[0]:
            best = (d, a, b)
    _, a, b = best
    merged = SourceGroup.of(groups[a].members + groups[b].members)
    return [g for i, g in enumerate(groups) if i not in (a, b)] + [merged]


def assignment_cost(bs_positions: Mapping[int, Point], pairing: Mapping[int, SourceGroup]) -> float:
    return math.fsum(bs_positions[b].dist(g.centroid) for b, g in pairing.items())


def assign_groups(
    bs_positions: Mapping[int, Point], groups: Sequence[SourceGroup]
) -> dict[int, SourceGroup]:
    """Minimum total-distance one-to-one matching of groups to base stations.

    Exhaustive over permutations, which is fine for the handful of stations
    this is meant for. Ties go to the lexicographically smallest id sequence.
    """
    groups = list(groups)
    if not groups:
        return {}
    while len(groups) > len(bs_positions):
        groups = _merge_closest(groups)
    ids = sorted(bs_positions)
    best_cost, best_perm = math.inf, None
    for perm in itertools.permutations(ids, len(groups)):
        cost = math.fsum(bs_positions[b].dist(g.centroid) for b, g in zip(perm, groups))
        if cost < best_cost:
            best_cost, best_perm = cost, perm
    return dict(zip(best_perm, groups))


def comaec_round(
    lists: Mapping[int, Sequence[SourceRecord]],
    bs_positions: Mapping[int, Point],
    round_index: int,
    r: float,
    seed: int = 0,
) -> dict[int, MoveCommand]:
    """One clustering phase. Empty input gives an empty mapping (everyone waits)."""
    pool = dedup_union(lists)
    if not pool:
        return {}
    ids = sorted(bs_positions)
    # head messaging is modeled as free, so the head's identity does not change the outcome
    elect_head(round_index, ids)
    groups = cluster_sources(pool, len(ids), seed)
    assignment = assign_groups(bs_positions, groups)
    commands = {}
    for b in ids:
        group = assignment.get(b)
        commands[b] = plan_move(group.members, bs_positions[b], r) if group else HOLD
    return commands


# --- round clock shared by all stations ---------------------------------------

@dataclass(frozen=True)
class StationPacket:
    bs_id: int
    record: SourceRecord


@dataclass(frozen=True)
class CoopState:
    phase: Phase = Phase.WAITING
    timer_remaining: int = 0
    lists: tuple[tuple[int, tuple[SourceRecord, ...]], ...] = ()
    round_index: int = 0

    def list_for(self, bs_id: int) -> tuple[SourceRecord, ...]:
        return dict(self.lists).get(bs_id, ())


def _add(state: CoopState, pkt: StationPacket) -> CoopState:
    lists = dict(state.lists)
    current = lists.get(pkt.bs_id, ())
    if any(r.node_id == pkt.record.node_id for r in current):
        return state
    lists[pkt.bs_id] = current + (pkt.record,)
    return replace(state, lists=tuple(sorted(lists.items())))


def comaec_step(state: CoopState, event, cfg: ControllerConfig,
                bs_positions: Mapping[int, Point], seed: int = 0):
    """Four-phase cooperative round; clustering happens inside the Discovery timeout."""
    phase = state.phase
    if isinstance(event, Tick):
        if phase is Phase.WAITING:
            return state, None
        return replace(state, timer_remaining=max(0, state.timer_remaining - 1)), None
    if isinstance(event, StationPacket):
        if phase is Phase.WAITING:
            fresh = CoopState(Phase.DISCOVERY, cfg.discovery_interval, (), state.round_index)
            return _add(fresh, event), None
        if phase is Phase.DISCOVERY:
            return _add(state, event), None
        return state, None
    if isinstance(event, TimerExpired):
        if phase is Phase.DISCOVERY:
            lists = dict(state.lists)
            if not any(lists.values()):
                return CoopState(round_index=state.round_index), None
            cmds = comaec_round(lists, bs_positions, state.round_index, cfg.comm_radius, seed)
            return CoopState(Phase.MOVING, cfg.moving_interval, (), state.round_index + 1), cmds
        if phase is Phase.MOVING:
            return CoopState(Phase.DISCOVERY, cfg.discovery_interval, (), state.round_index), None
        return state, None
    raise TypeError(f"unknown event {event!r}")
