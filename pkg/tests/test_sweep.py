import numpy as np

from instance_geom.instances import RangeInstance, SegmentSet
from instance_geom.meter import CostMeter
from instance_geom.reporting import (
    count_bruteforce,
    encode_relation,
    rangerep_sweep_oracle,
    relation_bruteforce,
    segint_sweep_oracle,
)
from instance_geom.sweep import (
    IntervalStabber,
    rangerep_sweep_counts,
    rangerep_sweep_pairs,
    segint_sweep_counts,
    segint_sweep_pairs,
)


def test_single_crossing():
    segs = SegmentSet([(0.0, 2.0, 1.0)], [(1.0, 0.0, 2.0)])
    assert segint_sweep_oracle(segs).pairs == [(0, 0)]


def test_short_horizontal_misses():
    segs = SegmentSet([(0.0, 0.5, 1.0)], [(1.0, 0.0, 2.0)])
    rep = segint_sweep_oracle(segs)
    assert rep.K == 0 and rep.pairs == []


def test_closed_endpoints_touch():
    # vertical at the right end of the horizontal, horizontal at the top of the vertical
    assert segint_sweep_pairs([(0.0, 1.0, 2.0)], [(1.0, 0.5, 2.0)]) == [(0, 0)]
    assert rangerep_sweep_pairs([(1.0, 2.0)], [(0.0, 1.0, 0.5, 2.0)]) == [(0, 0)]


def test_segint_matches_bruteforce(make):
    segs = make("segint-random", 120, seed=3)
    inst = encode_relation(segs)
    meter = CostMeter()
    assert segint_sweep_oracle(segs, meter).pairs == relation_bruteforce(inst)
    assert meter.comparisons > 0
    assert segint_sweep_counts(segs.horizontals, segs.verticals) == count_bruteforce(inst)


def test_rangerep_matches_bruteforce(make):
    ranges = make("rangerep-random", 120, seed=4)
    inst = encode_relation(ranges)
    assert rangerep_sweep_oracle(ranges).pairs == relation_bruteforce(inst)
    assert rangerep_sweep_counts(ranges.points, ranges.rects) == count_bruteforce(inst)


def test_id_restriction(make):
    segs = make("segint-random", 60, seed=8)
    inst = encode_relation(segs)
    h_ids, v_ids = [0, 3, 5, 9], [1, 2, 7, 11, 20]
    want = [(h, v) for h, v in relation_bruteforce(inst) if h in h_ids and v in v_ids]
    assert segint_sweep_pairs(segs.horizontals, segs.verticals, h_ids, v_ids) == want
    h_counts, v_counts = segint_sweep_counts(segs.horizontals, segs.verticals, h_ids, v_ids)
    assert sum(h_counts) == sum(v_counts) == len(want)
    assert all(h_counts[h] == 0 for h in range(len(h_counts)) if h not in h_ids)


def test_interval_stabber(rng):
    ends = np.sort(rng.uniform(0.0, 1.0, (30, 2)), axis=1)
    stabber = IntervalStabber(ends.ravel())
    for k, (a, b) in enumerate(ends):
        stabber.insert(a, b, k)
    for k in range(0, 30, 3):
        stabber.remove(ends[k][0], ends[k][1], k)
    for value in list(rng.uniform(0.0, 1.0, 50)) + [ends[1][0], ends[2][1]]:
        want = sorted(k for k, (a, b) in enumerate(ends) if k % 3 and a <= value <= b)
        assert sorted(stabber.stab(value)) == want


def test_range_instance_tuple_encoding():
    inst = encode_relation(([(0.5, 0.5)], [(0.0, 1.0, 0.25, 0.75)]))
    assert relation_bruteforce(inst) == [(0, 0)]
    assert isinstance(inst.decode(), RangeInstance)


def test_sweep_charges_comparison_bounds():
    meter = CostMeter()
    segint_sweep_pairs([(0.0, 1.0, 0.5)], [(0.5, 0.0, 1.0)], meter=meter)
    # sorting 3 events: 3 * 2; open, probe and close: 1 each
    assert meter.comparisons == 9
    assert meter.orient2d_calls == meter.orient3d_calls == 0
