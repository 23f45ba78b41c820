import logging
from dataclasses import dataclass, field
from functools import cmp_to_key

from instance_geom.config import make_rng
from instance_geom.errors import ConfigError, GeometryError
from instance_geom.meter import CostMeter, PointAccess, select_kth
from instance_geom.points import PointSequence

logger = logging.getLogger(__name__)

X = 0


@dataclass
class UpperHull2:
    vertices: list
    meter: CostMeter = field(default_factory=CostMeter)

    def to_json(self):
        return {"vertices": list(self.vertices), "meter": self.meter.to_json()}


def _x_order(access, indices):
    return sorted(indices, key=cmp_to_key(lambda a, b: -1 if access.less(a, b, X) else 1))


def bridge_from_access(access, left, right, rng):
    """
    Upper-hull edge (u, v) of left + right with u in `left` and v in
    `right`, where every left point lies left of every right point.
    Seidel-style incremental LP in random order.
    """
    perm = [int(i) for i in rng.permutation(len(left) + len(right))]
    pool = list(left) + list(right)
    is_left = set(left)
    order = [pool[k] for k in perm]
    u = next(i for i in order if i in is_left)
    v = next(i for i in order if i not in is_left)
    processed = [u, v]
    for p in order:
        if p == u or p == v:
            continue
        if access.orient2d(u, v, p) > 0:
            if p in is_left:
                u, v = p, None
                for c in processed:
                    if access.less(p, c, X) and (v is None or access.orient2d(p, v, c) > 0):
                        v = c
            else:
                u, v = None, p
                for c in processed:
                    if access.less(c, p, X) and (u is None or access.orient2d(u, p, c) > 0):
                        u = c
        processed.append(p)
    return u, v


def upper_bridge(Q, x_m, meter=None, rng=None):
    """
    The upper-hull edge of Q crossing the vertical line just right of x_m.
    Points with x <= x_m count as left.
    """
    pts = Q if isinstance(Q, PointSequence) else PointSequence(Q)
    pts.require(dim=2, hull=True)
    access = PointAccess(pts, meter, strict=True)
    probe = (float(x_m), 0.0)
    left, right = [], []
    for i in range(len(pts)):
        (right if access.less(probe, i, X) else left).append(i)
    if not left or not right:
        raise GeometryError(f"all points lie on one side of x = {x_m}")
    return bridge_from_access(access, left, right, make_rng(rng))


def upper_hull_from_access(access, indices, rng):
    def solve(Q):
        if len(Q) <= 2:
            return _x_order(access, Q)
        lo = hi = Q[0]
        for i in Q[1:]:
            if access.less(i, lo, X):
                lo = i
            if access.less(hi, i, X):
                hi = i
        Q = [i for i in Q if i == lo or i == hi or access.orient2d(lo, hi, i) >= 0]
        if len(Q) == 2:
            return [lo, hi]

        m = select_kth(Q, (len(Q) - 1) // 2, lambda a, b: access.less(a, b, X), rng=rng)
        left, right = [m], []
        for i in Q:
            if i != m:
                (left if access.less(i, m, X) else right).append(i)
        q, q2 = bridge_from_access(access, left, right, rng)

        # points strictly inside the bridge's x-range lie under it
        kept_left = [i for i in left if i == q or access.less(i, q, X)]
        kept_right = [i for i in right if i == q2 or access.less(q2, i, X)]
        return solve(kept_left) + solve(kept_right)

    return solve(list(indices))


def hull2d(seq, meter=None, rng=None):
    seq.require(dim=2, min_n=2, hull=True)
    meter = meter if meter is not None else CostMeter()
    access = PointAccess(seq, meter, strict=True)
    with meter.timed():
        vertices = upper_hull_from_access(access, range(len(seq)), make_rng(rng))
    logger.debug("hull2d: n=%d h=%d cost=%d", len(seq), len(vertices), meter.cost)
    return UpperHull2(vertices, meter)


def lower_hull2d(seq, meter=None, rng=None):
    """Lower hull in increasing x, via the upper hull of the reflected set."""
    upper = hull2d(seq.reflected(), meter=meter, rng=rng)
    return UpperHull2(list(reversed(upper.vertices)), upper.meter)


def convex_hull2d(seq, meter=None, rng=None):
    """Counter-clockwise convex hull starting at the leftmost point."""
    meter = meter if meter is not None else CostMeter()
    rng = make_rng(rng)
    lower = lower_hull2d(seq, meter=meter, rng=rng).vertices
    upper = hull2d(seq, meter=meter, rng=rng).vertices
    return UpperHull2(lower + list(reversed(upper))[1:-1], meter)


def monotone_chain_from_access(access, indices):
    stack = []
    for p in _x_order(access, indices):
        while len(stack) >= 2 and access.orient2d(stack[-2], stack[-1], p) >= 0:
            stack.pop()
        stack.append(p)
    return stack


def bruteforce_upper_hull(access, indices):
    indices = list(indices)
    if len(indices) <= 2:
        return _x_order(access, indices)
    vertices = set()
    for i in indices:
        for j in indices:
            if i == j or not access.less(i, j, X):
                continue
            if all(k in (i, j) or access.orient2d(i, j, k) < 0 for k in indices):
                vertices.update((i, j))
    return _x_order(access, vertices)


def hull2d_oracle(seq, method="monotone-chain", meter=None):
    seq.require(dim=2, hull=True)
    meter = meter if meter is not None else CostMeter()
    access = PointAccess(seq, meter, strict=True)
    with meter.timed():
        if method == "monotone-chain":
            vertices = monotone_chain_from_access(access, range(len(seq)))
        elif method == "bruteforce":
            vertices = bruteforce_upper_hull(access, range(len(seq)))
        else:
            raise ConfigError(f"unknown hull2d oracle {method!r}")
    return UpperHull2(vertices, meter)
