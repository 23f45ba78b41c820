"""
3-d upper hull by doubling partition rounds.

Each round partitions the surviving points into r_j = 2^(2^j) k-d cells,
asks the batched below-hull oracle about the corners of every cell, and
drops whole cells lying strictly below the upper hull. The survivors go to
a randomized incremental hull.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations

import numpy as np

from instance_geom.config import (
    DEFAULT_CAP_EXPONENT,
    DEFAULT_DELTA,
    DEFAULT_GROUP_SIZE,
    make_rng,
    round_schedule,
)
from instance_geom.errors import ConfigError, DegenerateInputError, GeometryError
from instance_geom.kdtree import median_partition, median_split
from instance_geom.meter import CostMeter, PointAccess
from instance_geom.points import BoxD, PointSequence

logger = logging.getLogger(__name__)


@dataclass
class RoundStat:
    round: int
    r: int
    before: int
    after: int
    cells: int
    pruned_cells: int
    crossing_stat: int

    def to_json(self):
        return dict(self.__dict__)


@dataclass
class Partition3:
    r: int
    subsets: list
    cells: list
    crossing_stat: int = 0

    def to_json(self):
        return {
            "r": self.r,
            "sizes": [len(s) for s in self.subsets],
            "cells": [c.to_json() for c in self.cells],
            "crossing_stat": self.crossing_stat,
        }


@dataclass
class UpperHull3:
    vertices: list
    facets: list
    meter: CostMeter = field(default_factory=CostMeter)
    pruned_at_round: dict = field(default_factory=dict)
    rounds: list = field(default_factory=list)

    def pruned_fraction(self, r):
        """Share of the input pruned once the first round with at least r cells ran; None if none did."""
        for stat in self.rounds:
            if stat.r >= r:
                return 1.0 - stat.after / self.rounds[0].before
        return None

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "facets": [list(f) for f in self.facets],
            "meter": self.meter.to_json(),
            "rounds": [r.to_json() for r in self.rounds],
        }


def _normalize(facet):
    k = facet.index(min(facet))
    return facet[k:] + facet[:k]


def _upper_result(access, faces, meter):
    facets = sorted(_normalize(f) for f in faces if access.orient2d(*f) > 0)
    vertices = sorted({i for f in facets for i in f})
    return UpperHull3(vertices, facets, meter)


def _initial_simplex(access, order):
    a, b = order[0], order[1]
    for c in order[2:]:
        for d in order[2:]:
            if d != c and access.orient3d(a, b, c, d) != 0:
                return a, b, c, d
    raise DegenerateInputError("all points are coplanar", indices=order[:4])


def convex_hull_faces(access, indices, rng):
    """
    Randomized incremental convex hull with conflict lists. Faces are
    triples (a, b, c) with every other point p satisfying
    orient3d(a, b, c, p) < 0.
    """
    indices = [int(i) for i in indices]
    order = [indices[k] for k in rng.permutation(len(indices))]
    a, b, c, d = _initial_simplex(access, order)
    if access.orient3d(a, b, c, d) > 0:
        b, c = c, b
    faces = [(a, b, c), (b, d, c), (a, c, d), (a, d, b)]

    edge_face = {}
    face_conf = {}
    point_conf = {}

    def register(f):
        for e in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0])):
            edge_face[e] = f
        face_conf[f] = set()

    for f in faces:
        register(f)
    rest = [i for i in order if i not in (a, b, c, d)]
    for p in rest:
        point_conf[p] = set()
        for f in faces:
            if access.orient3d(*f, p) > 0:
                face_conf[f].add(p)
                point_conf[p].add(f)

    for p in rest:
        visible = point_conf.pop(p)
        if not visible:
            continue
        created = []
        for f in visible:
            for u, w in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0])):
                g = edge_face[(w, u)]
                if g in visible:
                    continue
                nf = (u, w, p)
                conf = set()
                for q in face_conf[f] | face_conf[g]:
                    if q != p and access.orient3d(u, w, p, q) > 0:
                        conf.add(q)
                created.append((nf, conf))
        for f in visible:
            for q in face_conf.pop(f):
                if q in point_conf:
                    point_conf[q].discard(f)
            for e in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0])):
                if edge_face.get(e) == f:
                    del edge_face[e]
        for nf, conf in created:
            register(nf)
            face_conf[nf] = conf
            for q in conf:
                point_conf[q].add(nf)
    return list(face_conf)


def upper_hull3_from_access(access, indices, rng, meter=None):
    indices = list(indices)
    meter = meter if meter is not None else access.meter
    if len(indices) == 3:
        a, b, c = indices
        if access.orient2d(a, b, c) < 0:
            b, c = c, b
        return _upper_result(access, [(a, b, c)], meter)
    return _upper_result(access, convex_hull_faces(access, indices, rng), meter)


def bruteforce_upper_hull3(access, indices, meter=None):
    indices = list(indices)
    faces = []
    for a, b, c in combinations(indices, 3):
        o = access.orient2d(a, b, c)
        if o == 0:
            continue
        if o < 0:
            b, c = c, b
        if all(p in (a, b, c) or access.orient3d(a, b, c, p) < 0 for p in indices):
            faces.append((a, b, c))
    return _upper_result(access, faces, meter if meter is not None else access.meter)


def hull3d_oracle(seq, method="incremental", meter=None, rng=None):
    seq.require(dim=3, min_n=3, hull=True)
    meter = meter if meter is not None else CostMeter()
    access = PointAccess(seq, meter, strict=True)
    with meter.timed():
        if method == "incremental":
            return upper_hull3_from_access(access, range(len(seq)), make_rng(rng), meter)
        if method == "bruteforce":
            return bruteforce_upper_hull3(access, range(len(seq)), meter)
    raise ConfigError(f"unknown hull3d oracle {method!r}")


def _xy_hull(access, indices):
    """Counter-clockwise convex hull of the xy-projections."""
    def xy_cmp(a, b):
        for axis in (0, 1):
            if access.less(a, b, axis):
                return -1
            if access.less(b, a, axis):
                return 1
        return 0

    pts = sorted(indices, key=cmp_to_key(xy_cmp))
    if len(pts) < 3:
        return pts

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and access.orient2d(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    return lower[:-1] + upper[:-1]


class BelowHullOracle:
    """
    Decides exactly whether probes lie strictly below the upper hull of a
    point set, by a most-violated-constraint LP over the union of per-group
    upper-hull vertices.
    """

    def __init__(self, access, indices, group_size, rng):
        indices = list(indices)
        if not indices:
            raise GeometryError("below-hull oracle over an empty point set")
        self.access = access
        verts = []
        for s in range(0, len(indices), group_size):
            group = indices[s:s + group_size]
            if len(group) <= 3:
                verts.extend(group)
                continue
            faces = convex_hull_faces(access, group, rng)
            verts.extend(sorted({i for f in faces if access.orient2d(*f) >= 0 for i in f}))
        self.vertices = verts
        self.coords = np.array([access.points[i] for i in verts], dtype=float)
        scale = float(np.abs(self.coords).max()) if len(verts) else 1.0
        self.tol = 1e-8 * max(scale, 1e-100) ** 3
        self.polygon = _xy_hull(access, verts)
        self._facets = None

    def strictly_below(self, v):
        acc = self.access
        poly = self.polygon
        if len(poly) < 3:
            return False
        h0 = poly[0]
        if acc.orient2d(h0, poly[1], v) < 0 or acc.orient2d(h0, poly[-1], v) > 0:
            return False
        lo, hi = 1, len(poly) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if acc.orient2d(h0, poly[mid], v) >= 0:
                lo = mid
            else:
                hi = mid
        if acc.orient2d(poly[lo], poly[lo + 1], v) < 0:
            return False

        basis = (h0, poly[lo], poly[lo + 1])
        for _ in range(len(self.vertices) + 16):
            q = self._most_violated(basis)
            if q is None:
                return acc.orient3d(*basis, v) < 0
            basis = self._pivot(basis, q, v)
            if basis is None:
                break
        return self._fallback(v)

    def _most_violated(self, basis):
        acc = self.access
        b = self.coords_of(basis)
        normal = np.cross(b[1] - b[0], b[2] - b[0])
        d = (self.coords - b[0]) @ normal
        # float filter: one orientation evaluation per vertex
        acc.meter.orient3d_calls += len(self.vertices)
        cand = np.nonzero(d > -self.tol)[0]
        for k in cand[np.argsort(-d[cand], kind="stable")]:
            q = self.vertices[k]
            if q in basis:
                continue
            if acc.orient3d(*basis, q) > 0:
                return q
        return None

    def coords_of(self, basis):
        return np.array([self.access.points[i] for i in basis], dtype=float)

    def _pivot(self, basis, q, v):
        acc = self.access
        for k in range(3):
            t = list(basis)
            t[k] = q
            o = acc.orient2d(*t)
            if o == 0:
                continue
            if o < 0:
                t[1], t[2] = t[2], t[1]
            if (
                acc.orient2d(t[0], t[1], v) >= 0
                and acc.orient2d(t[1], t[2], v) >= 0
                and acc.orient2d(t[2], t[0], v) >= 0
                and acc.orient3d(*t, basis[k]) < 0
            ):
                return tuple(t)
        return None

    def _fallback(self, v):
        acc = self.access
        if self._facets is None:
            logger.debug("below-hull oracle: falling back to facet scan")
            self._facets = upper_hull3_from_access(acc, self.vertices, make_rng(0)).facets
        for f in self._facets:
            if all(acc.orient2d(f[k], f[(k + 1) % 3], v) >= 0 for k in range(3)):
                return acc.orient3d(*f, v) < 0
        return False


def below_upper_hull_batch(Q, probes, meter=None, rng=None, group_size=None):
    pts = Q if isinstance(Q, PointSequence) else PointSequence(Q)
    if len(pts) == 0:
        raise GeometryError("below_upper_hull_batch needs a nonempty point set")
    pts.require(dim=3, hull=True)
    probes = [tuple(float(c) for c in v) for v in probes]
    m = group_size or max(len(probes), DEFAULT_GROUP_SIZE)
    access = PointAccess(pts, meter, strict=True)
    oracle = BelowHullOracle(access, range(len(pts)), m, make_rng(rng))
    return [oracle.strictly_below(v) for v in probes]


def crossing_statistic(access, indices, cells, rng, planes=100):
    """Max number of cells crossed by random planes through input points."""
    if not cells or not indices:
        return 0
    corners = np.array(
        [[(x, y, z) for x in (c.lo[0], c.hi[0]) for y in (c.lo[1], c.hi[1]) for z in (c.lo[2], c.hi[2])] for c in cells]
    )
    coords = np.array([access.points[i] for i in indices], dtype=float)
    best = 0
    for _ in range(planes):
        normal = rng.normal(size=3)
        offset = coords[rng.integers(len(coords))] @ normal
        side = corners @ normal - offset
        crossed = np.count_nonzero((side.min(axis=1) < 0) & (side.max(axis=1) > 0))
        best = max(best, int(crossed))
    return best


def partition3_from_access(access, indices, r, rng, planes=100):
    indices = list(indices)
    depth = max(0, math.ceil(math.log2(r))) if r > 1 else 0
    subsets = [s for s in median_partition(access, indices, depth, 3, rng) if s]
    cells = [BoxD.bounding([access.points[i] for i in s]) for s in subsets]
    stat = crossing_statistic(access, indices, cells, rng, planes) if planes else 0
    return Partition3(len(subsets), subsets, cells, stat)


def kd_partition3(Q, r, meter=None, rng=None, planes=100):
    Q.require(dim=3)
    if not 1 <= r <= max(1, len(Q)):
        raise GeometryError(f"cell count {r} out of range for {len(Q)} points")
    access = PointAccess(Q, meter)
    return partition3_from_access(access, range(len(Q)), r, make_rng(rng), planes)


def _prune_cells(access, Q, subsets, rng, group_size):
    oracle = BelowHullOracle(access, Q, group_size, rng)
    pruned = []
    for s in subsets:
        box = BoxD.bounding([access.points[i] for i in s])
        if all(oracle.strictly_below(c) for c in box.corners()):
            pruned.append(s)
    return pruned


def hull3d(
    seq,
    meter=None,
    rng=None,
    delta=DEFAULT_DELTA,
    cap=DEFAULT_CAP_EXPONENT,
    hierarchical=False,
    planes=100,
):
    seq.require(dim=3, min_n=3, hull=True)
    meter = meter if meter is not None else CostMeter()
    rng = make_rng(rng)
    access = PointAccess(seq, meter, strict=True)
    n = len(seq)
    Q = list(range(n))
    pruned_at = {}
    rounds = []

    with meter.timed():
        schedule = round_schedule(n, delta, cap)
        if hierarchical:
            cells, level = [list(Q)], 0
        for j, r in enumerate(schedule):
            if len(Q) <= 3:
                break
            before = len(Q)
            group_size = max(8 * r, DEFAULT_GROUP_SIZE)
            if hierarchical:
                target = math.ceil(math.log2(r)) if r > 1 else 0
                n_cells, n_pruned = 0, 0
                while level < target:
                    cells = [part for c in cells for part in median_split(access, c, level % 3, rng) if part]
                    level += 1
                    dead = _prune_cells(access, Q, cells, rng, group_size)
                    for s in dead:
                        for i in s:
                            pruned_at[i] = j
                    dead_ids = {id(s) for s in dead}
                    cells = [c for c in cells if id(c) not in dead_ids]
                    Q = [i for c in cells for i in c]
                    n_cells += len(cells) + len(dead)
                    n_pruned += len(dead)
                boxes = [BoxD.bounding([access.points[i] for i in c]) for c in cells]
                stat = crossing_statistic(access, Q, boxes, rng, planes) if planes else 0
            else:
                part = partition3_from_access(access, Q, r, rng, planes)
                dead = _prune_cells(access, Q, part.subsets, rng, group_size)
                gone = set()
                for s in dead:
                    gone.update(s)
                    for i in s:
                        pruned_at[i] = j
                Q = [i for i in Q if i not in gone]
                n_cells, n_pruned, stat = part.r, len(dead), part.crossing_stat
            rounds.append(RoundStat(j, r, before, len(Q), n_cells, n_pruned, stat))
            logger.debug("hull3d round %d: r=%d |Q| %d -> %d", j, r, before, len(Q))

        result = upper_hull3_from_access(access, Q, rng, meter)
    result.pruned_at_round = pruned_at
    result.rounds = rounds
    return result
