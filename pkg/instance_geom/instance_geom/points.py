import math
from collections import namedtuple
from itertools import combinations

import numpy as np

from instance_geom.config import HULL_CHECK_MAX_N
from instance_geom.errors import DegenerateInputError, GeometryError
from instance_geom.predicates import orient2d, orient3d


def _finite(coords):
    out = tuple(float(c) for c in coords)
    for c in out:
        if not math.isfinite(c):
            raise GeometryError(f"non-finite coordinate in {coords!r}")
    return out


class Point2(namedtuple("Point2", "x y")):
    __slots__ = ()

    def __new__(cls, x, y):
        return super().__new__(cls, *_finite((x, y)))


class Point3(namedtuple("Point3", "x y z")):
    __slots__ = ()

    def __new__(cls, x, y, z):
        return super().__new__(cls, *_finite((x, y, z)))


def make_point(coords):
    if len(coords) == 2:
        return Point2(*coords)
    if len(coords) == 3:
        return Point3(*coords)
    raise GeometryError(f"points must have 2 or 3 coordinates, got {len(coords)}")


def distinct_axes_violation(points):
    """Return (axis, i, j) for the first shared coordinate, or None."""
    if not points:
        return None
    for axis in range(len(points[0])):
        order = sorted(range(len(points)), key=lambda i: points[i][axis])
        for a, b in zip(order, order[1:]):
            if points[a][axis] == points[b][axis]:
                return axis, min(a, b), max(a, b)
    return None


def hull_position_violation(points):
    """Return indices of a collinear triple (2-d) or coplanar quadruple (3-d), or None."""
    if not points:
        return None
    if len(points[0]) == 2:
        for i, j, k in combinations(range(len(points)), 3):
            if orient2d(points[i], points[j], points[k]) == 0:
                return i, j, k
        return None
    for i, j, k, l in combinations(range(len(points)), 4):
        if orient3d(points[i], points[j], points[k], points[l]) == 0:
            return i, j, k, l
    return None


def validate_nondegenerate(points, hull=False):
    violation = distinct_axes_violation(points)
    if violation is not None:
        axis, i, j = violation
        raise DegenerateInputError(
            f"points {i} and {j} share coordinate {points[i][axis]!r} on axis {axis}",
            indices=(i, j),
        )
    if hull:
        bad = hull_position_violation(points)
        if bad is not None:
            what = "collinear" if len(bad) == 3 else "coplanar"
            raise DegenerateInputError(f"points {bad} are {what}", indices=bad)


class PointSequence:
    """
    Ordered 2-d or 3-d input. Index i is position i; `general_position`
    certifies distinct coordinates on every axis.
    """

    def __init__(self, points, meta=None):
        pts = [p if isinstance(p, (Point2, Point3)) else make_point(p) for p in points]
        if pts and any(len(p) != len(pts[0]) for p in pts):
            raise GeometryError("points of mixed dimension")
        self.points = tuple(pts)
        self.dim = len(pts[0]) if pts else 0
        self.meta = dict(meta or {})
        self.general_position = distinct_axes_violation(self.points) is None
        self._array = None

    @classmethod
    def from_array(cls, array, meta=None):
        return cls([tuple(row) for row in np.asarray(array, dtype=float).tolist()], meta)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        return isinstance(other, PointSequence) and self.points == other.points

    def __repr__(self):
        return f"PointSequence(n={len(self)}, dim={self.dim}, meta={self.meta})"

    @property
    def ids(self):
        return range(len(self.points))

    @property
    def array(self):
        if self._array is None:
            self._array = np.array(self.points, dtype=float).reshape(len(self.points), self.dim)
            self._array.setflags(write=False)
        return self._array

    def require(self, dim=None, min_n=0, hull=False):
        """
        With `hull`, collinear triples and coplanar quadruples are also
        rejected; exhaustively up to HULL_CHECK_MAX_N points, beyond that
        by the strict predicates of the hull algorithms.
        """
        if dim is not None and len(self) and self.dim != dim:
            raise GeometryError(f"expected {dim}-d points, got {self.dim}-d")
        if len(self) < min_n:
            raise GeometryError(f"need at least {min_n} points, got {len(self)}")
        validate_nondegenerate(self.points, hull=hull and len(self) <= HULL_CHECK_MAX_N)
        return self

    def permuted(self, order):
        return PointSequence([self.points[i] for i in order], self.meta)

    def subset(self, indices):
        return PointSequence([self.points[i] for i in indices], self.meta)

    def reflected(self):
        """Negate every coordinate; the upper hull of the result is the lower hull of self, mirrored."""
        return PointSequence(
            [tuple(-c for c in p) for p in self.points], self.meta
        )


class BoxD:
    def __init__(self, lo, hi):
        if len(lo) != len(hi):
            raise GeometryError("box bounds of different dimension")
        self.lo = tuple(float(v) for v in lo)
        self.hi = tuple(float(v) for v in hi)
        for a, b in zip(self.lo, self.hi):
            if a > b:
                raise GeometryError(f"empty box interval [{a}, {b}]")

    @classmethod
    def bounding(cls, points):
        arr = np.asarray(points, dtype=float)
        return cls(arr.min(axis=0).tolist(), arr.max(axis=0).tolist())

    @property
    def dim(self):
        return len(self.lo)

    @property
    def upper_corner(self):
        return self.hi

    def contains(self, p):
        return all(a <= c <= b for a, c, b in zip(self.lo, p, self.hi))

    def corners(self):
        out = [()]
        for a, b in zip(self.lo, self.hi):
            out = [c + (v,) for c in out for v in ((a, b) if a != b else (a,))]
        return out

    def top_corners(self):
        """Corners on the top face (maximum of the last axis)."""
        return [c for c in self.corners() if c[-1] == self.hi[-1]]

    def __eq__(self, other):
        return isinstance(other, BoxD) and self.lo == other.lo and self.hi == other.hi

    def __repr__(self):
        return f"BoxD(lo={self.lo}, hi={self.hi})"

    def to_json(self):
        return {"lo": list(self.lo), "hi": list(self.hi)}


class SimplexD:
    def __init__(self, vertices):
        self.vertices = tuple(tuple(v) for v in vertices)
        dim = len(self.vertices[0])
        if len(self.vertices) != dim + 1:
            raise GeometryError(f"a {dim}-simplex needs {dim + 1} vertices")
        if self._orientation() == 0:
            raise GeometryError("simplex vertices are affinely dependent")

    @property
    def dim(self):
        return len(self.vertices[0])

    def _orientation(self):
        if self.dim == 2:
            return orient2d(*self.vertices)
        return orient3d(*self.vertices)

    def contains(self, p):
        """Closed containment, decided exactly."""
        s = self._orientation()
        vs = self.vertices
        for k in range(len(vs)):
            face = list(vs)
            face[k] = tuple(p)
            sign = orient2d(*face) if self.dim == 2 else orient3d(*face)
            if sign * s < 0:
                return False
        return True

    def corners(self):
        return list(self.vertices)

    def __repr__(self):
        return f"SimplexD({self.vertices})"

    def to_json(self):
        return {"vertices": [list(v) for v in self.vertices]}
