"""
Difficulty measures: entropy of respectful partitions, the vertical and
k-d partitions, the slab measure F(S) and a brute-force minimum for tiny
inputs.

Enclosures are respectful when their interior lies strictly below the
staircase or upper hull; the closed enclosure may touch it.
"""
import logging
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from instance_geom.config import BRUTEFORCE_MAX_N
from instance_geom.errors import ConfigError, GeometryError, MalformedPartitionError
from instance_geom.hull2d import hull2d_oracle
from instance_geom.kdtree import BoxTree, Staircase, UpperChain
from instance_geom.maxima import maxima_oracle
from instance_geom.points import BoxD, SimplexD
from instance_geom.predicates import orient2d, orient3d

logger = logging.getLogger(__name__)

PROBLEMS = ("maxima2d", "upperhull2d", "upperhull3d", "relation-safe")


@dataclass
class RespectfulPartition:
    subsets: list
    enclosures: list
    problem: str = "maxima2d"

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ConfigError(f"unknown partition problem {self.problem!r}")
        if len(self.subsets) != len(self.enclosures):
            raise MalformedPartitionError("one enclosure per subset is required")

    @property
    def n(self):
        return sum(len(s) for s in self.subsets)

    @property
    def sizes(self):
        return [len(s) for s in self.subsets]

    @property
    def entropy(self):
        return partition_entropy(self)


@dataclass
class EntropyReport:
    n: int
    h_output: int
    h_vert: float
    h_kd: float
    h_partition: float
    f_measure_bits: float = None
    extra: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "h_partition": self.h_partition,
            "h_vert": self.h_vert,
            "h_kd": self.h_kd,
            "f_measure_bits": self.f_measure_bits,
            "n": self.n,
            "h_output": self.h_output,
        }


def entropy_of_sizes(sizes, n=None):
    n = sum(sizes) if n is None else n
    if n == 0:
        return 0.0
    return sum((s / n) * math.log2(n / s) for s in sizes if s)


def partition_entropy(partition):
    return entropy_of_sizes(partition.sizes)


def _check_cover(partition, S):
    seen = set()
    for subset, enc in zip(partition.subsets, partition.enclosures):
        for i in subset:
            if i in seen:
                raise MalformedPartitionError(f"point {i} appears in two subsets")
            if not 0 <= i < len(S):
                raise MalformedPartitionError(f"point {i} out of range")
            seen.add(i)
            if enc is not None and not enc.contains(S[i]):
                raise MalformedPartitionError(f"point {i} lies outside its enclosure {enc!r}")
        if len(subset) > 1 and enc is None:
            raise MalformedPartitionError("non-singleton subset without enclosure")
    if len(seen) != len(S):
        raise MalformedPartitionError(f"partition covers {len(seen)} of {len(S)} points")


class UpperTerrain:
    """Weakly-below test against a 3-d upper hull given by its facets."""

    def __init__(self, points, facets):
        self.facets = [tuple(points[i] for i in f) for f in facets]

    def weakly_below(self, v):
        for a, b, c in self.facets:
            if orient2d(a, b, v) >= 0 and orient2d(b, c, v) >= 0 and orient2d(c, a, v) >= 0:
                return orient3d(a, b, c, v) <= 0
        return False


def _structure(S, problem):
    if problem == "maxima2d":
        return Staircase(S, maxima_oracle(S, "sortscan").maximal)
    if problem == "upperhull2d":
        return UpperChain(S, hull2d_oracle(S, "monotone-chain").vertices)
    if problem == "upperhull3d":
        from instance_geom.hull3d import hull3d_oracle

        return UpperTerrain(S, hull3d_oracle(S, "incremental").facets)
    raise ConfigError(f"no staircase or hull structure for {problem!r}")


def _respects(structure, problem, enc):
    if problem == "maxima2d":
        corner = enc.hi if isinstance(enc, BoxD) else BoxD.bounding(enc.corners()).hi
        return structure.weakly_below(corner)
    return all(structure.weakly_below(v) for v in enc.corners())


def is_respectful(partition, S, problem=None, instance=None, color="red"):
    """
    True iff every non-singleton enclosure is respectful for `problem`.
    Relation partitions are checked for safety against `instance`.
    """
    problem = problem or partition.problem
    if problem == "relation-safe":
        from instance_geom.reporting import safety_test

        _check_cover(partition, S)
        return all(
            enc is None or len(sub) <= 1 or safety_test(instance, color, enc)
            for sub, enc in zip(partition.subsets, partition.enclosures)
        )
    _check_cover(partition, S)
    structure = _structure(S, problem)
    return all(
        enc is None or len(sub) <= 1 or _respects(structure, problem, enc)
        for sub, enc in zip(partition.subsets, partition.enclosures)
    )


def _lowered_triangle(S, u, v, inside):
    """Triangle (u, v, w) with w below the strip until it contains `inside`."""
    pu, pv = S[u], S[v]
    ys = [S[i][1] for i in inside] + [pu[1], pv[1]]
    mid = (pu[0] + pv[0]) / 2.0
    drop = max(1.0, max(ys) - min(ys))
    for _ in range(1100):
        w = (mid, min(ys) - drop)
        tri = SimplexD([pu, pv, w])
        if all(tri.contains(S[i]) for i in inside):
            return tri
        drop *= 2.0
    raise GeometryError(f"could not enclose the points under edge ({u}, {v})")


def vertical_partition(S, problem="maxima2d"):
    S.require(dim=2)
    if problem == "maxima2d":
        maximal = maxima_oracle(S, "sortscan").maximal
        xs = [S[q][0] for q in maximal]
        strips = [[] for _ in maximal]
        for i, p in enumerate(S):
            strips[bisect_left(xs, p[0])].append(i)
        enclosures = [
            BoxD.bounding([S[i] for i in strip]) if len(strip) > 1 else None for strip in strips
        ]
        return RespectfulPartition(strips, enclosures, "maxima2d")

    if problem == "upperhull2d":
        hull = hull2d_oracle(S, "monotone-chain").vertices
        if len(hull) == 1:
            return RespectfulPartition([[hull[0]]], [None], "upperhull2d")
        xs = [S[v][0] for v in hull]
        strips = [[] for _ in range(len(hull) - 1)]
        for i, p in enumerate(S):
            k = bisect_left(xs, p[0])
            strips[max(k - 1, 0)].append(i)
        enclosures = []
        for e, strip in enumerate(strips):
            if len(strip) <= 1:
                enclosures.append(None)
                continue
            u, v = hull[e], hull[e + 1]
            inside = [i for i in strip if i not in (u, v)]
            enclosures.append(_lowered_triangle(S, u, v, inside))
        return RespectfulPartition(strips, enclosures, "upperhull2d")
    raise ConfigError(f"vertical partition is defined for maxima2d and upperhull2d, not {problem!r}")


def kd_tree(S, problem="maxima2d"):
    """The alternating-median box tree whose leaves form the k-d partition."""
    if problem == "maxima2d":
        stair = Staircase(S, maxima_oracle(S, "sortscan").maximal)
        return BoxTree(S, lambda box: stair.strictly_below(box.hi))
    if problem in ("upperhull2d", "upperhull2d-boxes"):
        chain = UpperChain(S, hull2d_oracle(S, "monotone-chain").vertices)
        return BoxTree(S, lambda box: all(chain.strictly_below(c) for c in box.top_corners()))
    raise ConfigError(f"k-d partition is defined for maxima2d and upperhull2d-boxes, not {problem!r}")


def kd_respectful_partition(S, problem="maxima2d"):
    S.require(dim=2)
    tree = kd_tree(S, problem)
    leaves = tree.leaves()
    label = "maxima2d" if problem == "maxima2d" else "upperhull2d"
    return RespectfulPartition(
        [list(leaf.idx) for leaf in leaves],
        [leaf.tight if leaf.size > 1 else None for leaf in leaves],
        label,
    )


def f_measure(S):
    """Sum over points of log2(n / |F(p)|), F(p) the open slab around p's dominators."""
    S.require(dim=2)
    n = len(S)
    if n <= 1:
        return 0.0
    maximal = maxima_oracle(S, "sortscan").maximal
    qx = [S[q][0] for q in maximal]
    qy_desc = [-S[q][1] for q in maximal]
    all_x = sorted(p[0] for p in S)
    position = {q: k for k, q in enumerate(maximal)}
    total = 0.0
    for idx, p in enumerate(S):
        if idx in position:
            first = last = position[idx]
        else:
            first = bisect_right(qx, p[0])
            last = bisect_left(qy_desc, -p[1]) - 1
        lo = qx[first - 1] if first > 0 else -math.inf
        hi = qx[last + 1] if last + 1 < len(maximal) else math.inf
        size = bisect_left(all_x, hi) - bisect_right(all_x, lo)
        total += math.log2(n / size)
    return total


def _hull_indices(S, block):
    pts = sorted(block, key=lambda i: S[i][0])
    if len(pts) < 3:
        return pts

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orient2d(S[out[-2]], S[out[-1]], S[p]) <= 0:
                out.pop()
            out.append(p)
        return out

    return chain(pts)[:-1] + chain(list(reversed(pts)))[:-1]


def _line_meet(a, b, c, d):
    """Intersection of lines ab and cd in exact arithmetic, or None if parallel."""
    ax, ay, bx, by = map(Fraction, (a[0], a[1], b[0], b[1]))
    cx, cy, dx, dy = map(Fraction, (c[0], c[1], d[0], d[1]))
    den = (bx - ax) * (dy - cy) - (by - ay) * (dx - cx)
    if den == 0:
        return None
    t = ((cx - ax) * (dy - cy) - (cy - ay) * (dx - cx)) / den
    return (ax + t * (bx - ax), ay + t * (by - ay))


def minimal_enclosing_triangle(S, block):
    """
    Smallest-area triangle bounded by three lines through edges of the
    block's convex hull; the hull itself when it has at most 3 vertices.
    """
    poly = _hull_indices(S, block)
    if len(poly) <= 3:
        return [S[i] for i in poly]
    edges = [(S[poly[k]], S[poly[(k + 1) % len(poly)]]) for k in range(len(poly))]
    best, best_area = None, None
    for e1, e2, e3 in combinations(edges, 3):
        corners = [_line_meet(*e1, *e2), _line_meet(*e2, *e3), _line_meet(*e3, *e1)]
        if any(c is None for c in corners):
            continue
        if orient2d(*corners) < 0:
            corners = [corners[0], corners[2], corners[1]]
        if orient2d(*corners) == 0:
            continue
        if not all(
            orient2d(corners[k], corners[(k + 1) % 3], S[i]) >= 0 for i in poly for k in range(3)
        ):
            continue
        (x0, y0), (x1, y1), (x2, y2) = corners
        area = abs((x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0))
        if best_area is None or area < best_area:
            best, best_area = corners, area
    return best


def _block_valid(S, block, problem, structure):
    if len(block) == 1:
        return True
    if problem == "maxima2d":
        corner = (max(S[i][0] for i in block), max(S[i][1] for i in block))
        return structure.weakly_below(corner)
    if len(block) == 2:
        return True
    tri = minimal_enclosing_triangle(S, block)
    return tri is not None and all(structure.weakly_below(v) for v in tri)


def structural_entropy_bruteforce(S, problem="maxima2d"):
    """Minimum entropy over all respectful set partitions, by subset DP."""
    n = len(S)
    if n > BRUTEFORCE_MAX_N:
        raise GeometryError(f"brute-force entropy needs n <= {BRUTEFORCE_MAX_N}, got {n}")
    if n <= 1:
        return 0.0
    S.require(dim=2)
    if problem not in ("maxima2d", "upperhull2d"):
        raise ConfigError(f"brute-force entropy is defined for maxima2d and upperhull2d, not {problem!r}")
    structure = _structure(S, problem)

    full = (1 << n) - 1
    valid = [False] * (full + 1)
    cost = [0.0] * (full + 1)
    for mask in range(1, full + 1):
        block = [i for i in range(n) if mask >> i & 1]
        valid[mask] = _block_valid(S, block, problem, structure)
        cost[mask] = (len(block) / n) * math.log2(n / len(block))

    best = [math.inf] * (full + 1)
    best[0] = 0.0
    for mask in range(1, full + 1):
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        while True:
            block = sub | low
            if valid[block]:
                cand = cost[block] + best[mask ^ block]
                if cand < best[mask]:
                    best[mask] = cand
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return best[full]


def entropy_report(S, problem="maxima2d"):
    S.require(dim=2)
    n = len(S)
    if problem == "maxima2d":
        h = len(maxima_oracle(S, "sortscan").maximal)
        f_bits = f_measure(S)
    elif problem == "upperhull2d":
        h = len(hull2d_oracle(S, "monotone-chain").vertices)
        f_bits = None
    else:
        raise ConfigError(f"entropy report is defined for maxima2d and upperhull2d, not {problem!r}")
    h_vert = vertical_partition(S, problem).entropy
    h_kd = kd_respectful_partition(S, problem).entropy
    h_partition = min(h_vert, h_kd)
    extra = {}
    if n <= BRUTEFORCE_MAX_N:
        extra["h_bruteforce"] = structural_entropy_bruteforce(S, problem)
        h_partition = min(h_partition, extra["h_bruteforce"])
    logger.debug("entropy report: n=%d h=%d h_vert=%.3f h_kd=%.3f", n, h, h_vert, h_kd)
    return EntropyReport(n, h, h_vert, h_kd, h_partition, f_bits, extra)

