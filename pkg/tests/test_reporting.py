import numpy as np
import pytest

from instance_geom.entropy import is_respectful
from instance_geom.errors import ConfigError, GeometryError
from instance_geom.instances import SegmentSet
from instance_geom.kdtree import GroupedRangeTree, RangeTree
from instance_geom.meter import CostMeter
from instance_geom.points import BoxD, PointSequence
from instance_geom.reporting import (
    RANGEREP,
    SEGINT,
    PairReport,
    build_tree,
    count_adaptive,
    count_bruteforce,
    encode_relation,
    kd_box_query,
    opposite,
    relation_bruteforce,
    report_adaptive,
    safety_partition,
    safety_test,
    semantic_safety,
)


def _unsafe_pair():
    # both horizontals lie in one box but only the first meets the vertical
    return encode_relation(SegmentSet([(0.0, 2.0, 1.0), (0.5, 1.0, 3.0)], [(1.5, 0.0, 2.0)]))


def test_encoding_and_decoding():
    raw = SegmentSet([(0.0, 2.0, 1.0)], [(1.0, 0.0, 2.0)])
    inst = encode_relation(raw)
    assert inst.relation is SEGINT
    assert inst.interacts(0, 0)
    assert inst.decode() == raw
    assert len(inst) == 2
    with pytest.raises(ConfigError):
        encode_relation(PointSequence([(0.0, 1.0)]))


def test_query_boxes():
    lo, hi = RANGEREP.query_box("red", (0.3, 0.7))
    assert lo[1] == 0.3 and hi[0] == 0.3 and lo[3] == 0.7 and hi[2] == 0.7
    assert RANGEREP.interacts((0.3, 0.7), (0.0, 1.0, 0.5, 0.9))
    assert not RANGEREP.interacts((0.3, 0.7), (0.4, 1.0, 0.5, 0.9))
    assert SEGINT.dim("blue") == 3 and RANGEREP.dim("blue") == 4
    with pytest.raises(ConfigError):
        opposite("green")


def test_separated_segments_prune_everything(make):
    inst = encode_relation(make("segint-separated", 64, seed=1))
    rep = report_adaptive(inst, rng=0, delta=1.0)
    assert rep.K == 0
    assert rep.extra["survivors"] == {"red": 0, "blue": 0}
    assert count_adaptive(inst, "total", rng=0, delta=1.0).total == 0


def test_crossing_grid(make):
    inst = encode_relation(make("segint-crossing-grid", 32, seed=2, h=16, v=16))
    rep = report_adaptive(inst, rng=0, delta=1.0)
    assert rep.K == 256
    assert rep.pairs == [(h, v) for h in range(16) for v in range(16)]
    counts = count_adaptive(inst, "individual", rng=0, delta=1.0)
    assert counts.total == 256
    assert counts.red_counts == [16] * 16 and counts.blue_counts == [16] * 16


@pytest.mark.parametrize("family", ["segint-random", "rangerep-random"])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_adaptive_matches_bruteforce(make, family, seed):
    inst = encode_relation(make(family, 90, seed=seed))
    truth = relation_bruteforce(inst)
    meter = CostMeter()
    rep = report_adaptive(inst, meter, rng=seed, delta=1.0)
    assert rep.pairs == truth and rep.K == len(truth)
    assert meter.cost > 0

    counts = count_adaptive(inst, "individual", rng=seed, delta=1.0)
    red, blue = count_bruteforce(inst)
    assert counts.total == len(truth)
    assert counts.red_counts == red and counts.blue_counts == blue
    total = count_adaptive(inst, "total", rng=seed, delta=1.0)
    assert total.total == len(truth) and total.red_counts is None


def test_default_schedule_matches_bruteforce(make):
    inst = encode_relation(make("rangerep-random", 300, seed=5))
    assert report_adaptive(inst, rng=1).pairs == relation_bruteforce(inst)


def test_safety_examples():
    inst = _unsafe_pair()
    box = BoxD((0.0, 1.0, 1.0), (0.5, 2.0, 3.0))
    assert not safety_test(inst, "red", box)
    assert not semantic_safety(inst, "red", box)
    assert safety_test(inst, "red", BoxD((0.0, 2.0, 1.0), (0.0, 2.0, 1.0)))
    with pytest.raises(GeometryError):
        safety_test(inst, "red", ((0.0, 0.0), (1.0, 1.0)))


@pytest.mark.parametrize("family", ["segint-random", "rangerep-random"])
@pytest.mark.parametrize("color", ["red", "blue"])
def test_safety_is_sound(make, rng, family, color):
    inst = encode_relation(make(family, 60, seed=6))
    pts = inst.points(color)
    tree = build_tree(inst, opposite(color))
    for _ in range(200):
        size = int(rng.integers(2, 5))
        pick = rng.choice(len(pts), size=size, replace=False)
        box = BoxD.bounding([pts[i] for i in pick])
        if safety_test(inst, color, box, tree):
            assert semantic_safety(inst, color, box)


def test_kd_box_query_matches_scan(rng):
    coords = rng.uniform(0.0, 1.0, (200, 3))
    ids = list(range(100, 300))
    trees = [RangeTree(coords, ids), GroupedRangeTree(coords, ids, 16)]
    for _ in range(100):
        a, b = np.sort(rng.uniform(0.0, 1.0, (2, 3)), axis=0)
        want = [ids[k] for k in range(200) if np.all((a <= coords[k]) & (coords[k] <= b))]
        for tree in trees:
            assert kd_box_query(tree, (tuple(a), tuple(b)), "report") == want
            assert kd_box_query(tree, (tuple(a), tuple(b)), "count") == len(want)
            assert kd_box_query(tree, BoxD(a, b), "empty") == (not want)
    with pytest.raises(ConfigError):
        kd_box_query(trees[0], (tuple(a), tuple(b)), "nearest")


def test_add_to_box_and_flush(rng):
    coords = rng.uniform(0.0, 1.0, (50, 2))
    tree = RangeTree(coords)
    counters = [0] * 50
    boxes = [np.sort(rng.uniform(0.0, 1.0, (2, 2)), axis=0) for _ in range(10)]
    for a, b in boxes:
        tree.add_to_box(tuple(a), tuple(b), 3, counters)
    tree.flush(counters)
    for k in range(50):
        hits = sum(bool(np.all((a <= coords[k]) & (coords[k] <= b))) for a, b in boxes)
        assert counters[k] == 3 * hits


@pytest.mark.parametrize("family", ["segint-random", "rangerep-random", "segint-separated"])
def test_safety_partition_is_respectful(make, family):
    inst = encode_relation(make(family, 64, seed=3))
    for color in ("red", "blue"):
        part = safety_partition(inst, color, rng=0)
        pts = inst.points(color)
        assert is_respectful(part, pts, "relation-safe", instance=inst, color=color)
        assert sorted(i for s in part.subsets for i in s) == list(range(len(pts)))


def test_separated_partition_is_one_cell(make):
    inst = encode_relation(make("segint-separated", 64, seed=3))
    assert safety_partition(inst, "red", rng=0).entropy == 0.0


def test_bad_count_mode(make):
    inst = encode_relation(make("segint-random", 10))
    with pytest.raises(ConfigError):
        count_adaptive(inst, "pairs")


def test_pair_report_cap():
    rep = PairReport([(0, k) for k in range(5)], 5)
    out = rep.to_json(cap=2)
    assert out["pairs"] == [[0, 0], [0, 1]]
    assert out["truncated"] and out["K"] == 5
