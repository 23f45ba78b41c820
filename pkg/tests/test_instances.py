import numpy as np
import pytest

from instance_geom.errors import ConfigError, DegenerateInputError, GeometryError, InstanceFormatError
from instance_geom.instances import (
    FAMILIES,
    InstanceSpec,
    RangeInstance,
    SegmentSet,
    _sampled_hull_violation,
    generate,
    load,
    save,
)
from instance_geom.maxima import maxima_oracle
from instance_geom.points import PointSequence


@pytest.mark.parametrize("family", FAMILIES)
def test_generate_is_deterministic_and_nondegenerate(family):
    a = generate(InstanceSpec(family, 20, seed=3))
    b = generate(InstanceSpec(family, 20, seed=3))
    assert a == b
    assert len(a) == 20
    if isinstance(a, PointSequence):
        a.require()
        assert a.meta["family"] == family
    else:
        a.validate()


def test_different_seeds_differ():
    assert generate(InstanceSpec("uniform-square", 16, seed=1)) != generate(InstanceSpec("uniform-square", 16, seed=2))


def test_maxima_families(make):
    hard = make("maxima-hard", 40)
    assert len(maxima_oracle(hard, "sortscan").maximal) == 40
    easy = make("maxima-easy", 40)
    assert len(maxima_oracle(easy, "sortscan").maximal) == 3
    assert easy.meta["known_sizes"] == [1, 1, 1, 37]


def test_hull2d_hard_is_in_convex_position(make):
    S = make("hull2d-hard", 20)
    S.require(dim=2, hull=True)
    assert S.meta["known_sizes"] == [1] * 20


def test_crossing_grid_shape():
    segs = generate(InstanceSpec("segint-crossing-grid", 10, params={"h": 3, "v": 7}))
    assert len(segs.horizontals) == 3 and len(segs.verticals) == 7
    with pytest.raises(ConfigError):
        InstanceSpec("segint-crossing-grid", 4, params={"h": 0, "v": 0})


def test_unknown_family_and_bad_n():
    with pytest.raises(ConfigError):
        InstanceSpec("no-such-family", 10)
    with pytest.raises(ConfigError):
        InstanceSpec("maxima-easy", 0)
    with pytest.raises(ConfigError):
        InstanceSpec("clustered", 10, params={"k": 11})


@pytest.mark.parametrize("family", ["uniform-ball", "segint-random", "rangerep-random"])
def test_save_load_round_trip(tmp_path, family):
    inst = generate(InstanceSpec(family, 12, seed=5))
    path = tmp_path / "inst.txt"
    save(inst, path)
    assert load(path) == inst


def test_load_reports_line_numbers(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("# header\n0.1 0.2\n0.3 oops\n")
    with pytest.raises(InstanceFormatError) as err:
        load(path)
    assert err.value.line == 3
    assert str(err.value) == f"{path}:3:not a number in '0.3 oops'"

    path.write_text("0.1 0.2\n0.3 0.4 0.5\n")
    with pytest.raises(InstanceFormatError) as err:
        load(path)
    assert err.value.line == 2

    path.write_text("H 0.0 1.0 0.5\n0.2 0.3\n")
    with pytest.raises(InstanceFormatError):
        load(path)

    path.write_text("0.1 inf\n")
    with pytest.raises(GeometryError):
        load(path)


def test_segment_and_range_validation():
    with pytest.raises(GeometryError):
        SegmentSet([(1.0, 0.0, 0.5)], [])
    with pytest.raises(GeometryError):
        SegmentSet([], [(0.5, 1.0, 1.0)])
    with pytest.raises(DegenerateInputError):
        SegmentSet([(0.0, 1.0, 0.5)], [(1.0, 0.0, 1.0)]).validate()
    with pytest.raises(GeometryError):
        RangeInstance([], [(0.0, 0.0, 0.0, 1.0)])
    with pytest.raises(DegenerateInputError):
        RangeInstance([(0.5, 0.25)], [(0.0, 1.0, 0.25, 0.75)]).validate()


def test_missing_file_is_a_format_error(tmp_path):
    path = tmp_path / "absent.txt"
    with pytest.raises(InstanceFormatError) as err:
        load(path)
    assert err.value.path == path
    assert str(err.value).startswith(f"{path}:cannot read instance")


def test_sampled_hull_check_finds_collinear_points():
    points = [(float(i), 2.0 * i + 1.0) for i in range(40)]
    found = _sampled_hull_violation(points, np.random.default_rng(0), 50)
    assert found is not None and len(set(found)) == 3


def test_large_hull_families_are_certified(make):
    S = make("hull2d-easy", 300, seed=1)
    assert len(S) == 300 and S.general_position
