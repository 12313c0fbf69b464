import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BS, R, worked_example
from maecsim.comaec import (
    ConfigurationError,
    CoopState,
    SourceGroup,
    StationPacket,
    assign_groups,
    assignment_cost,
    cluster_sources,
    comaec_round,
    comaec_step,
    dedup_union,
    elect_head,
)
from maecsim.geometry import Point, bearing
from maecsim.mobility import (
    HOLD,
    TICK,
    TIMER_EXPIRED,
    WAITING,
    ControllerConfig,
    DataPacket,
    Phase,
    SourceRecord,
    maec_step,
)


def test_elect_head():
    assert elect_head(0, [0, 1, 2]) == 0
    assert elect_head(5, [2, 0, 1]) == 2
    assert all(elect_head(k, [3]) == 3 for k in range(10))
    with pytest.raises(ConfigurationError):
        elect_head(0, [])


@given(st.lists(st.integers(0, 50), min_size=1, max_size=6, unique=True), st.integers(0, 1000))
def test_head_election_period(ids, k):
    assert elect_head(k, ids) == elect_head(k + len(ids), ids)


def recs(points, start=0):
    return [SourceRecord(start + i, Point(float(x), float(y))) for i, (x, y) in enumerate(points)]


def test_cluster_k1_is_mean():
    rs = recs([(0, 0), (10, 0), (5, 30)])
    (g,) = cluster_sources(rs, 1)
    assert g.centroid == Point(5.0, 10.0)
    assert len(g.members) == 3


def test_cluster_caps_count():
    groups = cluster_sources(recs([(0, 0), (100, 100)]), 3)
    assert sorted(len(g.members) for g in groups) == [1, 1]


def test_cluster_empty():
    assert cluster_sources([], 2) == []


def sse(groups):
    total = 0.0
    for g in groups:
        cx = sum(p.x for p in g) / len(g)
        cy = sum(p.y for p in g) / len(g)
        total += sum((p.x - cx) ** 2 + (p.y - cy) ** 2 for p in g)
    return total


def brute_force_two_partition(points):
    """Minimum within-group SSE over every split into two nonempty groups."""
    best = None
    n = len(points)
    for mask in range(1, 2 ** (n - 1)):
        a = [points[i] for i in range(n) if mask >> i & 1]
        b = [points[i] for i in range(n) if not mask >> i & 1]
        cost = sse([a, b])
        if best is None or cost < best[0]:
            best = (cost, {frozenset(a), frozenset(b)})
    return best[1]


@settings(max_examples=50)
@given(st.integers(0, 10_000))
def test_two_blobs_match_brute_force(seed):
    import random

    rng = random.Random(seed)
    r = 100.0
    def blob(cx, cy, n):
        # pairwise intra-blob distance below r
        return [Point(cx + rng.uniform(-30, 30), cy + rng.uniform(-30, 30)) for _ in range(n)]
    pts = blob(100, 100, rng.randint(1, 5)) + blob(100 + 11 * r, 300, rng.randint(1, 5))
    rs = [SourceRecord(i, p) for i, p in enumerate(pts)]
    groups = cluster_sources(rs, 2, seed)
    got = {frozenset(m.location for m in g.members) for g in groups}
    assert got == brute_force_two_partition(pts)


@given(st.lists(st.tuples(st.integers(0, 500), st.integers(0, 500)), min_size=1, max_size=15),
       st.integers(1, 4), st.integers(0, 100))
def test_cluster_partition_and_determinism(pts, k, seed):
    rs = recs(pts)
    groups = cluster_sources(rs, k, seed)
    ids = sorted(m.node_id for g in groups for m in g.members)
    assert ids == list(range(len(rs)))
    assert len(groups) <= min(k, len(rs))
    assert groups == cluster_sources(rs, k, seed)
    for g in groups:
        assert g.centroid.x == pytest.approx(sum(m.location.x for m in g.members) / len(g.members))


def test_assign_examples():
    g1 = SourceGroup.of(recs([(9, 0)]))
    g2 = SourceGroup.of(recs([(1, 0)], 1))
    got = assign_groups({0: Point(0.0, 0.0), 1: Point(10.0, 0.0)}, [g1, g2])
    assert got[0] is g2 and got[1] is g1
    assert assign_groups({0: Point(0.0, 0.0)}, [g1]) == {0: g1}


def test_assign_ties_go_to_lowest_id():
    same = [SourceGroup.of(recs([(5, 5)])), SourceGroup.of(recs([(5, 5)], 1))]
    got = assign_groups({0: Point(0.0, 0.0), 1: Point(10.0, 10.0)}, same)
    assert got[0] is same[0] and got[1] is same[1]


def test_assign_merges_surplus_groups():
    gs = [SourceGroup.of(recs([(0, 0)])), SourceGroup.of(recs([(1, 0)], 1)),
          SourceGroup.of(recs([(100, 0)], 2))]
    got = assign_groups({0: Point(0.0, 0.0), 1: Point(100.0, 0.0)}, gs)
    assert len(got[0].members) == 2 and len(got[1].members) == 1


pts = st.tuples(st.integers(0, 750), st.integers(0, 750)).map(lambda t: Point(float(t[0]), float(t[1])))


@given(st.lists(pts, min_size=1, max_size=4), st.lists(pts, min_size=1, max_size=4))
def test_assignment_optimal(bs_list, centroids):
    centroids = centroids[: len(bs_list)]
    bs = dict(enumerate(bs_list))
    groups = [SourceGroup.of([SourceRecord(i, c)]) for i, c in enumerate(centroids)]
    got = assign_groups(bs, groups)
    assert len(got) == len(groups)
    assert len(set(id(g) for g in got.values())) == len(groups)
    best = min(
        math.fsum(bs[b].dist(g.centroid) for b, g in zip(perm, groups))
        for perm in itertools.permutations(bs, len(groups))
    )
    assert assignment_cost(bs, got) <= best + 1e-9


def test_round_single_bs_matches_maec():
    ws = worked_example()
    cmds = comaec_round({0: ws}, {0: BS}, 0, R)
    assert cmds[0].direction == pytest.approx(5 * math.pi / 6, abs=1e-9)
    assert cmds[0].distance == pytest.approx(11 * R / 7, abs=1e-9 * R)


def test_round_no_sources():
    assert comaec_round({0: [], 1: []}, {0: BS, 1: Point(0.0, 0.0)}, 0, R) == {}


def test_round_two_hotspots_each_bs_heads_home():
    r = 100.0
    bs = {0: Point(100.0, 100.0), 1: Point(650.0, 650.0)}
    # hotspot A up-right of BS0 in mid-sector 1, hotspot B down-left of BS1 in mid-sector 5
    a = [SourceRecord(i, Point(350.0 + dx, 190.0 + dy)) for i, (dx, dy) in
         enumerate([(0, 0), (10, 5), (-8, 6), (5, -9)])]
    b = [SourceRecord(10 + i, Point(400.0 + dx, 560.0 + dy)) for i, (dx, dy) in
         enumerate([(0, 0), (7, 3), (-6, -4)])]
    # lists are deliberately crossed: routing does not decide assignment
    cmds = comaec_round({0: b, 1: a}, bs, 3, r)
    ga = SourceGroup.of(a)
    gb = SourceGroup.of(b)
    for b_id, g in ((0, ga), (1, gb)):
        want = bearing(bs[b_id], g.centroid)
        d = abs((cmds[b_id].direction - want + math.pi) % (2 * math.pi) - math.pi)
        assert d <= math.pi / 8


def test_surplus_station_holds():
    cmds = comaec_round({0: recs([(300, 300)])}, {0: Point(0.0, 0.0), 1: Point(700.0, 700.0)}, 0, R)
    assert cmds[0] == HOLD or cmds[1] == HOLD
    assert sum(c != HOLD for c in cmds.values()) == 1


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 20)), max_size=30))
def test_dedup_union_counts(reports):
    lists = {}
    for bs_id, node in reports:
        lists.setdefault(bs_id, []).append(SourceRecord(node, Point(float(node), 0.0)))
    pool = dedup_union(lists)
    assert len(pool) == len({n for _, n in reports})
    if pool:
        groups = cluster_sources(pool, max(1, len(lists)))
        assert sum(len(g.members) for g in groups) == len(pool)


@given(st.lists(st.tuples(st.integers(-400, 400), st.integers(-400, 400)), min_size=1, max_size=12))
def test_single_station_equivalence(offs):
    rs = [SourceRecord(i, Point(400.0 + dx, 400.0 + dy)) for i, (dx, dy) in enumerate(offs)]
    cfg = ControllerConfig(3, 2, R)
    s = WAITING
    for rec in rs:
        s, _ = maec_step(s, DataPacket(rec), cfg, BS)
    _, maec_cmd = maec_step(s, TIMER_EXPIRED, cfg, BS)
    coop_cmd = comaec_round({0: list(s.sources)}, {0: BS}, 0, R)[0]
    assert coop_cmd == maec_cmd
    assert repr(coop_cmd) == repr(maec_cmd)


def test_coop_state_machine():
    cfg = ControllerConfig(2, 2, R)
    pos = {0: BS, 1: Point(0.0, 0.0)}
    ws = worked_example()
    s = CoopState()
    s, out = comaec_step(s, StationPacket(0, ws[0]), cfg, pos)
    assert s.phase is Phase.DISCOVERY and out is None
    s, _ = comaec_step(s, StationPacket(1, ws[1]), cfg, pos)
    s, _ = comaec_step(s, StationPacket(1, ws[1]), cfg, pos)
    assert len(s.list_for(1)) == 1
    s, _ = comaec_step(s, TICK, cfg, pos)
    s, _ = comaec_step(s, TICK, cfg, pos)
    assert s.timer_remaining == 0
    s, cmds = comaec_step(s, TIMER_EXPIRED, cfg, pos)
    assert s.phase is Phase.MOVING and set(cmds) == {0, 1} and s.round_index == 1
    s, _ = comaec_step(s, TIMER_EXPIRED, cfg, pos)
    assert s.phase is Phase.DISCOVERY and s.lists == ()
    s, cmds = comaec_step(s, TIMER_EXPIRED, cfg, pos)
    assert s.phase is Phase.WAITING and cmds is None
