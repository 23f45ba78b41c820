import pytest

from instance_geom.errors import ConfigError, DegenerateInputError
from instance_geom.maxima import compress_witnesses, maxima2d, maxima_oracle
from instance_geom.meter import CostMeter
from instance_geom.points import PointSequence
from instance_geom.predicates import dominates


def test_small_staircase():
    S = PointSequence([(1.0, 3.0), (2.0, 2.0), (3.0, 1.0), (0.5, 0.5)])
    res = maxima2d(S, rng=0)
    assert res.maximal == [0, 1, 2]
    assert res.witness[3] in (0, 1, 2)


@pytest.mark.parametrize("family", ["maxima-easy", "maxima-hard", "uniform-square", "clustered"])
@pytest.mark.parametrize("prune", ["both", "left"])
def test_matches_oracles(make, family, prune):
    S = make(family, 120, seed=7)
    res = maxima2d(S, rng=11, prune=prune)
    assert res.maximal == maxima_oracle(S, "sortscan").maximal
    assert res.maximal == maxima_oracle(S, "bruteforce").maximal


def test_witnesses_dominate_and_are_maximal(make):
    S = make("uniform-square", 200, seed=2)
    res = maxima2d(S, rng=1)
    final = set(res.maximal)
    assert set(res.witness) == set(range(len(S))) - final
    for i, w in res.witness.items():
        assert w in final
        assert dominates(S[w], S[i])


def test_easy_instance_is_cheaper_than_hard(make):
    easy, hard = CostMeter(), CostMeter()
    maxima2d(make("maxima-easy", 512), easy, rng=0)
    maxima2d(make("maxima-hard", 512), hard, rng=0)
    assert easy.comparisons < hard.comparisons


def test_degenerate_and_bad_prune():
    with pytest.raises(DegenerateInputError):
        maxima2d(PointSequence([(0.0, 1.0), (0.0, 2.0)]))
    with pytest.raises(ConfigError):
        maxima2d(PointSequence([(0.0, 1.0), (1.0, 2.0)]), prune="right")
    with pytest.raises(ConfigError):
        maxima_oracle(PointSequence([(0.0, 1.0)]), "quickhull")


def test_trivial_sizes():
    assert maxima2d(PointSequence([])).maximal == []
    assert maxima2d(PointSequence([(0.3, 0.4)])).maximal == [0]


def test_compress_witnesses():
    assert compress_witnesses({1: 2, 2: 3, 4: 3}) == {1: 3, 2: 3, 4: 3}
