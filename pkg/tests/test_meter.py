import pytest

from instance_geom.config import default_seed, make_rng, round_schedule
from instance_geom.errors import ConfigError, DegenerateInputError, RankError
from instance_geom.meter import CostMeter, PointAccess, select_kth
from instance_geom.points import PointSequence


def test_access_charges_every_primitive():
    S = PointSequence([(0.0, 0.0), (1.0, 1.0), (2.0, -1.0)])
    access = PointAccess(S)
    assert access.less(0, 1, 0)
    assert access.dominates(1, 0)
    assert not access.dominates(2, 0)
    assert access.orient2d(0, 1, 2) == -1
    m = access.meter
    # one for less, two per dominance test
    assert m.comparisons == 5
    assert m.dominance_tests == 2
    assert m.orient2d_calls == 1
    assert m.cost == 6


def test_access_accepts_probe_tuples():
    S = PointSequence([(0.0, 0.0), (1.0, 1.0)])
    access = PointAccess(S)
    assert access.less((0.5, 9.0), 1, 0)
    assert access.orient2d(0, 1, (0.0, 1.0)) == 1


def test_strict_access_rejects_degenerate_input_points():
    S = PointSequence([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)])
    assert PointAccess(S).orient2d(0, 1, 2) == 0
    strict = PointAccess(S, strict=True)
    # a probe on the line is not an input degeneracy
    assert strict.orient2d(0, 1, (3.0, 3.0)) == 0
    with pytest.raises(DegenerateInputError) as err:
        strict.orient2d(0, 1, 2)
    assert err.value.indices == (0, 1, 2)
    assert strict.meter.orient2d_calls == 2


def test_strict_access_ignores_projections_in_3d():
    T = PointSequence([(0.0, 0.0, 0.5), (1.0, 1.0, 0.25), (2.0, 2.0, 1.0), (0.5, 3.0, 2.0)])
    access = PointAccess(T, strict=True)
    assert access.orient2d(0, 1, 2) == 0
    assert access.orient3d(0, 1, 2, 3) != 0


def test_meter_merge_and_counters():
    a = CostMeter(comparisons=3, orient2d_calls=1, wall_ns=10)
    b = CostMeter(comparisons=2, orient3d_calls=4, dominance_tests=1, wall_ns=5)
    a.merge(b)
    assert a.cost == 10
    assert a.counters() == {"comparisons": 5, "orient2d_calls": 1, "orient3d_calls": 4, "dominance_tests": 1}
    assert a.to_json()["wall_ns"] == 15
    with a.timed():
        pass
    assert a.wall_ns >= 15


@pytest.mark.parametrize("k", [0, 7, 19])
def test_select_kth(k):
    items = list(make_rng(3).permutation(20))
    meter = CostMeter()
    assert select_kth(items, k, lambda a, b: a < b, meter=meter, rng=5) == k
    assert meter.comparisons > 0


def test_select_kth_bad_rank():
    with pytest.raises(RankError):
        select_kth([1, 2, 3], 3, lambda a, b: a < b)
    with pytest.raises(RankError):
        select_kth([], 0, lambda a, b: a < b)


def test_round_schedule():
    assert round_schedule(2**16) == [2, 4, 16]
    assert round_schedule(2**16, delta=1.0) == [2, 4, 16, 256, 256]
    assert round_schedule(2**16, delta=0.5) == [2, 4, 16, 256]
    assert round_schedule(2**10, delta=1.0, cap=1.0) == [2, 4, 16, 256]
    assert round_schedule(8) == []
    assert round_schedule(1) == []


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("GEOM_SEED", "7")
    assert default_seed() == 7
    monkeypatch.setenv("GEOM_SEED", "seven")
    with pytest.raises(ConfigError):
        default_seed()
    monkeypatch.delenv("GEOM_SEED")
    assert default_seed() == 0
