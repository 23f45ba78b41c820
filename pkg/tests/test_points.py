import math

import pytest

from instance_geom.errors import DegenerateInputError, GeometryError
from instance_geom.points import BoxD, Point2, PointSequence, SimplexD, make_point


def test_point_rejects_non_finite():
    with pytest.raises(GeometryError):
        Point2(1.0, math.nan)
    with pytest.raises(GeometryError):
        make_point((1.0, 2.0, 3.0, 4.0))


def test_sequence_dimension_and_degeneracy():
    S = PointSequence([(0.0, 1.0), (1.0, 2.0)])
    assert S.dim == 2 and len(S) == 2
    with pytest.raises(GeometryError):
        S.require(dim=3)
    with pytest.raises(GeometryError):
        PointSequence([(0.0, 1.0), (1.0, 2.0, 3.0)])

    shared = PointSequence([(0.0, 1.0), (2.0, 3.0), (0.0, 5.0)])
    assert not shared.general_position
    with pytest.raises(DegenerateInputError) as err:
        shared.require(dim=2)
    assert err.value.indices == (0, 2)


def test_hull_position_check():
    collinear = PointSequence([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, -1.0)])
    collinear.require(dim=2)
    with pytest.raises(DegenerateInputError):
        collinear.require(dim=2, hull=True)


def test_array_is_read_only():
    S = PointSequence([(0.0, 1.0), (1.0, 2.0)])
    assert S.array.shape == (2, 2)
    with pytest.raises(ValueError):
        S.array[0, 0] = 5.0


def test_reflected_and_subset():
    S = PointSequence([(0.0, 1.0), (1.0, 2.0), (2.0, 0.5)])
    assert S.reflected()[1] == (-1.0, -2.0)
    assert S.subset([2, 0]).points == (S[2], S[0])
    assert S.permuted([1, 2, 0])[0] == S[1]


def test_box_contains_and_corners():
    box = BoxD((0.0, 0.0), (1.0, 2.0))
    assert box.contains((1.0, 2.0))
    assert box.contains((0.5, 0.0))
    assert not box.contains((1.5, 1.0))
    assert len(box.corners()) == 4
    assert sorted(box.top_corners()) == [(0.0, 2.0), (1.0, 2.0)]
    assert len(BoxD((0.0, 1.0), (0.0, 2.0)).corners()) == 2
    assert BoxD.bounding([(1.0, 5.0), (3.0, 2.0)]) == BoxD((1.0, 2.0), (3.0, 5.0))
    with pytest.raises(GeometryError):
        BoxD((1.0, 0.0), (0.0, 1.0))


def test_simplex_containment_is_closed():
    tri = SimplexD([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
    assert tri.contains((0.25, 0.25))
    assert tri.contains((0.5, 0.5))
    assert not tri.contains((0.6, 0.6))
    with pytest.raises(GeometryError):
        SimplexD([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)])
    tet = SimplexD([(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)])
    assert tet.contains((0.1, 0.1, 0.1))
    assert not tet.contains((1.0, 1.0, 1.0))
