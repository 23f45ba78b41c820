import pytest

from instance_geom.errors import ConfigError, DegenerateInputError, GeometryError
from instance_geom.hull3d import below_upper_hull_batch, hull3d, hull3d_oracle, kd_partition3
from instance_geom.points import PointSequence

TETRA = PointSequence([(0.0, 0.0, 0.0), (1.0, 0.1, 0.01), (0.1, 1.0, 0.02), (0.3, 0.3, 1.0)])


@pytest.mark.parametrize("family", ["hull3d-easy", "uniform-ball", "clustered"])
def test_matches_incremental(make, family):
    params = {"dim": 3} if family == "clustered" else {}
    S = make(family, 48, seed=6, **params)
    got = hull3d(S, rng=1, delta=1.0)
    want = hull3d_oracle(S, "incremental", rng=2)
    assert got.facets == want.facets
    assert got.vertices == want.vertices


def test_matches_bruteforce(make):
    S = make("uniform-ball", 16, seed=3)
    assert hull3d(S, rng=0, delta=1.0).facets == hull3d_oracle(S, "bruteforce").facets


def test_hierarchical_variant(make):
    S = make("hull3d-easy", 64, seed=2)
    got = hull3d(S, rng=5, delta=1.0, hierarchical=True)
    assert got.facets == hull3d_oracle(S, "incremental").facets


def test_paraboloid_keeps_every_point(make):
    S = make("hull3d-hard", 40, seed=1)
    assert hull3d(S, rng=0, delta=1.0).vertices == list(range(40))


def test_pruned_points_are_not_vertices(make):
    S = make("hull3d-easy", 256, seed=0)
    res = hull3d(S, rng=3, delta=1.0)
    assert res.pruned_at_round
    assert not set(res.pruned_at_round) & set(res.vertices)
    assert res.rounds[0].before == 256


def test_tetrahedron_facets():
    res = hull3d_oracle(TETRA, "bruteforce")
    assert res.vertices == [0, 1, 2, 3]
    assert len(res.facets) == 3


def test_below_upper_hull_batch():
    probes = [(0.25, 0.3, 0.5), (0.25, 0.3, 0.9), (5.0, 5.0, 0.0)]
    assert below_upper_hull_batch(TETRA, probes, rng=0) == [True, False, False]
    with pytest.raises(GeometryError):
        below_upper_hull_batch([], probes)


def test_kd_partition3_covers(make):
    S = make("uniform-ball", 100, seed=2)
    part = kd_partition3(S, 8, rng=0, planes=20)
    assert part.r == len(part.subsets) <= 8
    assert sorted(i for s in part.subsets for i in s) == list(range(100))
    for s, cell in zip(part.subsets, part.cells):
        assert all(cell.contains(S[i]) for i in s)
    with pytest.raises(GeometryError):
        kd_partition3(S, 0)


def test_bad_oracle():
    with pytest.raises(ConfigError):
        hull3d_oracle(TETRA, "gift-wrap")


def test_pruning_by_256_cells(make):
    S = make("hull3d-easy", 1024, seed=0)
    res = hull3d(S, rng=0, delta=1.0, cap=1.0, planes=0)
    assert [stat.r for stat in res.rounds] == [2, 4, 16, 256]
    assert res.pruned_fraction(256) >= 0.9
    assert res.facets == hull3d_oracle(S, "incremental", rng=1).facets


def test_default_schedule_stops_short_of_256_cells(make):
    res = hull3d(make("hull3d-easy", 1024, seed=0), rng=0, planes=0)
    assert [stat.r for stat in res.rounds] == [2, 4]
    assert res.pruned_fraction(256) is None


COPLANAR = PointSequence([(0.0, 0.125, 0.125), (1.0, 0.25, 1.25), (0.375, 1.0, 1.375), (0.5, 0.5, 1.0)])


def test_coplanar_input_is_rejected():
    for run in (
        lambda: hull3d(COPLANAR, rng=0),
        lambda: hull3d_oracle(COPLANAR, "incremental", rng=0),
        lambda: hull3d_oracle(COPLANAR, "bruteforce"),
    ):
        with pytest.raises(DegenerateInputError) as err:
            run()
        assert sorted(err.value.indices) == [0, 1, 2, 3]


def test_coplanar_points_past_the_exhaustive_check(make):
    S = make("hull3d-easy", 21, seed=1)
    # lifted above every generated point, still coplanar
    big = PointSequence(list(S) + [(x, y, z + 5.0) for x, y, z in COPLANAR])
    with pytest.raises(DegenerateInputError):
        hull3d_oracle(big, "bruteforce")
