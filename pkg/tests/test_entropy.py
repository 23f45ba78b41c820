import math

import pytest

from instance_geom.entropy import (
    RespectfulPartition,
    entropy_of_sizes,
    entropy_report,
    f_measure,
    is_respectful,
    kd_respectful_partition,
    structural_entropy_bruteforce,
    vertical_partition,
)
from instance_geom.errors import ConfigError, GeometryError, MalformedPartitionError
from instance_geom.hull2d import hull2d_oracle
from instance_geom.maxima import maxima_oracle
from instance_geom.points import BoxD, PointSequence
from instance_geom.presets import SLAB_MEASURE, THREE_PARTITION_ENTROPY


def test_entropy_of_sizes():
    assert entropy_of_sizes([4, 4, 4]) == pytest.approx(math.log2(3))
    assert entropy_of_sizes([1] * 16) == pytest.approx(4.0)
    assert entropy_of_sizes([7]) == 0.0
    assert entropy_of_sizes([]) == 0.0


def test_three_partition_fixture(three_partition_points, three_partition_fixture):
    assert is_respectful(three_partition_fixture, three_partition_points)
    assert three_partition_fixture.entropy == pytest.approx(THREE_PARTITION_ENTROPY, abs=1e-3)
    vert = vertical_partition(three_partition_points, "maxima2d")
    assert vert.sizes == [4, 4, 4]
    assert vert.entropy == pytest.approx(math.log2(3), abs=1e-3)
    assert is_respectful(vert, three_partition_points)


def test_slab_fixture(slab_points):
    assert f_measure(slab_points) == pytest.approx(SLAB_MEASURE, abs=1e-3)
    assert SLAB_MEASURE == pytest.approx(10.228, abs=1e-3)


def test_box_over_two_maxima_is_not_respectful(three_partition_points):
    S = three_partition_points
    subsets = [[0, 4]] + [[i] for i in range(len(S)) if i not in (0, 4)]
    enclosures = [BoxD.bounding([S[0], S[4]])] + [None] * (len(subsets) - 1)
    assert not is_respectful(RespectfulPartition(subsets, enclosures), S)


def test_malformed_partitions(three_partition_points):
    S = three_partition_points
    singles = [[i] for i in range(len(S))]
    with pytest.raises(MalformedPartitionError):
        RespectfulPartition(singles, [None])
    with pytest.raises(MalformedPartitionError):
        is_respectful(RespectfulPartition(singles[:-1], [None] * 11), S)
    with pytest.raises(MalformedPartitionError):
        is_respectful(RespectfulPartition(singles + [[0]], [None] * 13), S)
    far = BoxD((100.0, 100.0), (101.0, 101.0))
    with pytest.raises(MalformedPartitionError):
        is_respectful(RespectfulPartition([[1, 2]] + singles[3:] + [[0]], [far] + [None] * 10), S)
    with pytest.raises(ConfigError):
        RespectfulPartition(singles, [None] * 12, problem="sorting")


def test_all_maximal_needs_singletons(make):
    S = make("maxima-hard", 16)
    assert kd_respectful_partition(S).entropy == pytest.approx(4.0)
    assert vertical_partition(S).entropy == pytest.approx(4.0)


def test_bruteforce_minimum(make):
    S = make("maxima-easy", 8, seed=1)
    assert structural_entropy_bruteforce(S) == pytest.approx(entropy_of_sizes([1, 1, 6]))
    with pytest.raises(GeometryError):
        structural_entropy_bruteforce(make("maxima-easy", 13))


def test_bruteforce_upper_hull(make):
    S = make("hull2d-easy", 7, seed=2)
    h = structural_entropy_bruteforce(S, "upperhull2d")
    assert 0.0 <= h <= math.log2(7) + 1e-9


@pytest.mark.parametrize(
    "family,n,seed",
    [("uniform-square", 10, 4), ("uniform-square", 12, 7), ("clustered", 11, 2), ("maxima-easy", 9, 5)],
)
def test_bruteforce_is_below_every_respectful_partition(make, family, n, seed):
    S = make(family, n, seed=seed)
    brute = structural_entropy_bruteforce(S)
    kd = kd_respectful_partition(S)
    vert = vertical_partition(S)
    assert is_respectful(kd, S) and is_respectful(vert, S)
    assert brute <= kd.entropy + 1e-9
    assert brute <= vert.entropy + 1e-9
    singletons = RespectfulPartition([[i] for i in range(n)], [None] * n)
    assert singletons.entropy == pytest.approx(math.log2(n))
    assert brute <= singletons.entropy + 1e-9


@pytest.mark.parametrize("family", ["uniform-square", "clustered", "maxima-easy", "maxima-hard"])
def test_vertical_entropy_is_at_most_log_h_plus_one(make, family):
    S = make(family, 200, seed=3)
    h = len(maxima_oracle(S, "bruteforce").maximal)
    assert vertical_partition(S, "maxima2d").entropy <= math.log2(h) + 1


@pytest.mark.parametrize("family", ["hull2d-easy", "hull2d-hard", "uniform-disk"])
def test_vertical_hull_entropy_is_at_most_log_h_plus_one(make, family):
    S = make(family, 60, seed=3)
    h = len(hull2d_oracle(S, "bruteforce").vertices)
    assert vertical_partition(S, "upperhull2d").entropy <= math.log2(h) + 1


def test_box_above_the_upper_hull_is_not_respectful():
    # upper hull 0, 1, 2, 3; the box over 1 and 2 reaches (1, 3)
    S = PointSequence([(0.0, 0.0), (1.0, 2.0), (2.0, 3.0), (3.0, 1.0), (1.5, 0.2)])
    enclosures = [None, BoxD.bounding([S[1], S[2]]), None, None]
    part = RespectfulPartition([[0], [1, 2], [3], [4]], enclosures, "upperhull2d")
    assert not is_respectful(part, S)
    below = RespectfulPartition([[0], [1], [2], [3, 4]], [None, None, None, BoxD((1.5, 0.2), (3.0, 1.0))], "upperhull2d")
    assert is_respectful(below, S)


def test_entropy_report_fields(make):
    S = make("uniform-square", 10, seed=4)
    rep = entropy_report(S, "maxima2d")
    assert rep.h_vert == pytest.approx(vertical_partition(S).entropy)
    assert rep.h_kd == pytest.approx(kd_respectful_partition(S).entropy)
    assert rep.extra["h_bruteforce"] == pytest.approx(structural_entropy_bruteforce(S))
    assert rep.h_output == len(maxima_oracle(S, "bruteforce").maximal)


@pytest.mark.parametrize("problem", ["upperhull2d", "upperhull2d-boxes"])
def test_hull_partitions_are_respectful(make, problem):
    S = make("uniform-disk", 60, seed=3)
    part = vertical_partition(S, "upperhull2d") if problem == "upperhull2d" else kd_respectful_partition(S, problem)
    assert is_respectful(part, S, "upperhull2d")


def test_unknown_problem(make):
    with pytest.raises(ConfigError):
        entropy_report(make("uniform-square", 8), "sorting")
