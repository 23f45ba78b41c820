"""
k-d structures shared across the package:

- median_split / median_partition: metered lower-median splits cycling
  through the axes, used by hull3d and by the reporting rounds.
- BoxTree: the alternating-median tree of boxes whose leaves form the
  k-d respectful partition; the adversary walks the same tree.
- RangeTree / GroupedRangeTree: static trees over d-dimensional points with
  subtree counts, answering box emptiness, reporting and counting queries.
"""
import logging
from bisect import bisect_right

import numpy as np

from instance_geom.meter import select_kth
from instance_geom.points import BoxD
from instance_geom.predicates import orient2d

logger = logging.getLogger(__name__)


def median_split(access, indices, axis, rng):
    """Lower-median split: the left part gets the ceil(m/2) smallest."""
    indices = list(indices)
    if len(indices) < 2:
        return indices, []
    m = select_kth(indices, (len(indices) - 1) // 2, lambda a, b: access.less(a, b, axis), rng=rng)
    left, right = [m], []
    for i in indices:
        if i != m:
            (left if access.less(i, m, axis) else right).append(i)
    return left, right


def median_partition(access, indices, depth, dim, rng, start_axis=0):
    cells = [list(indices)]
    for level in range(depth):
        axis = (start_axis + level) % dim
        nxt = []
        for cell in cells:
            if len(cell) < 2:
                nxt.append(cell)
                continue
            left, right = median_split(access, cell, axis, rng)
            nxt.extend((left, right))
        cells = nxt
    return cells


class Staircase:
    """Exact strict-dominance test against the maximal points of a 2-d set."""

    def __init__(self, points, maximal):
        # maximal in increasing x, hence decreasing y
        self.maximal = [points[i] for i in maximal]
        self.xs = [p[0] for p in self.maximal]

    def strictly_below(self, c):
        k = bisect_right(self.xs, c[0])
        return k < len(self.maximal) and self.maximal[k][1] > c[1]

    def weakly_below(self, c):
        """Some point weakly dominates c."""
        k = bisect_right(self.xs, c[0])
        if k > 0 and self.xs[k - 1] == c[0]:
            k -= 1
        return k < len(self.maximal) and self.maximal[k][1] >= c[1]


class UpperChain:
    """Exact above/below tests against a 2-d upper hull given as points in x order."""

    def __init__(self, points, vertices):
        self.vertices = [points[i] for i in vertices]
        self.xs = [p[0] for p in self.vertices]

    def side(self, c):
        """-1 strictly below, 0 on, +1 above; None outside the x-range."""
        vs = self.vertices
        if not vs or c[0] < self.xs[0] or c[0] > self.xs[-1]:
            return None
        if len(vs) == 1:
            return (c[1] > vs[0][1]) - (c[1] < vs[0][1])
        k = min(max(bisect_right(self.xs, c[0]), 1), len(vs) - 1)
        return orient2d(vs[k - 1], vs[k], c)

    def strictly_below(self, c):
        return self.side(c) == -1

    def weakly_below(self, c):
        s = self.side(c)
        return s is not None and s <= 0


class BoxNode:
    def __init__(self, idx, box, depth, parent=None):
        self.idx = idx
        self.box = box
        self.depth = depth
        self.parent = parent
        self.axis = depth % 2
        self.split = None
        self.left = None
        self.right = None
        self.leaf = True
        self.tight = None
        self.id = -1

    @property
    def size(self):
        return len(self.idx)

    @property
    def children(self):
        return () if self.leaf else (self.left, self.right)

    def __repr__(self):
        return f"BoxNode(id={self.id}, depth={self.depth}, size={self.size}, leaf={self.leaf})"


class BoxTree:
    """
    Alternating-median tree of boxes over a 2-d point set. The root is the
    bounding box; a node is a leaf when it holds one point or when
    `below(tight_box)` holds for the bounding box of its points.
    """

    def __init__(self, points, below):
        self.points = points
        self.below = below
        self.nodes = []
        idx = list(range(len(points)))
        self.root = None
        if idx:
            self.root = self._build(idx, BoxD.bounding(points), 0, None)

    def _build(self, idx, box, depth, parent):
        node = BoxNode(idx, box, depth, parent)
        node.id = len(self.nodes)
        self.nodes.append(node)
        node.tight = BoxD.bounding([self.points[i] for i in idx])
        if len(idx) == 1 or self.below(node.tight):
            return node

        axis = node.axis
        order = sorted(idx, key=lambda i: self.points[i][axis])
        k = (len(order) + 1) // 2
        node.split = self.points[order[k - 1]][axis]
        node.leaf = False
        lo_hi = list(box.hi)
        lo_hi[axis] = node.split
        hi_lo = list(box.lo)
        hi_lo[axis] = node.split
        node.left = self._build(order[:k], BoxD(box.lo, lo_hi), depth + 1, node)
        node.right = self._build(order[k:], BoxD(hi_lo, box.hi), depth + 1, node)
        return node

    def leaves(self):
        return [node for node in self.nodes if node.leaf]

    def leaf_of(self):
        """Map point index -> leaf node holding it."""
        out = {}
        for leaf in self.leaves():
            for i in leaf.idx:
                out[i] = leaf
        return out


class _RangeNode:
    __slots__ = ("start", "end", "lo", "hi", "left", "right", "pending")

    def __init__(self, start, end, lo, hi):
        self.start = start
        self.end = end
        self.lo = lo
        self.hi = hi
        self.left = None
        self.right = None
        self.pending = 0

    @property
    def count(self):
        return self.end - self.start


class RangeTree:
    """
    Static k-d tree over points in R^d. Each node owns a contiguous slice of
    the permuted index array, so canonical subsets are slices.
    """

    def __init__(self, coords, ids=None, leaf_size=4, meter=None):
        self.coords = np.asarray(coords, dtype=float)
        if self.coords.ndim == 1:
            self.coords = self.coords.reshape(len(self.coords), -1)
        n = len(self.coords)
        self.dim = self.coords.shape[1] if n else 0
        self.ids = np.arange(n) if ids is None else np.asarray(ids)
        self.perm = np.arange(n)
        self.leaf_size = leaf_size
        self.meter = meter
        self.root = self._build(0, n, 0) if n else None

    def __len__(self):
        return len(self.coords)

    def _build(self, start, end, depth):
        pts = self.coords[self.perm[start:end]]
        node = _RangeNode(start, end, tuple(pts.min(axis=0)), tuple(pts.max(axis=0)))
        if end - start <= self.leaf_size:
            return node
        axis = depth % self.dim
        mid = (start + end) // 2
        seg = self.perm[start:end]
        order = np.argsort(self.coords[seg, axis], kind="stable")
        self.perm[start:end] = seg[order]
        node.left = self._build(start, mid, depth + 1)
        node.right = self._build(mid, end, depth + 1)
        return node

    def _charge(self, k):
        if self.meter is not None:
            self.meter.comparisons += k

    def _disjoint(self, node, lo, hi):
        self._charge(2 * self.dim)
        return any(node.hi[a] < lo[a] or node.lo[a] > hi[a] for a in range(self.dim))

    def _inside(self, node, lo, hi):
        self._charge(2 * self.dim)
        return all(lo[a] <= node.lo[a] and node.hi[a] <= hi[a] for a in range(self.dim))

    def _point_in(self, k, lo, hi):
        self._charge(2 * self.dim)
        c = self.coords[k]
        return all(lo[a] <= c[a] <= hi[a] for a in range(self.dim))

    def canonical(self, lo, hi):
        """Nodes fully inside the closed box and loose matching positions."""
        nodes, loose = [], []
        if self.root is None:
            return nodes, loose
        stack = [self.root]
        while stack:
            node = stack.pop()
            if self._disjoint(node, lo, hi):
                continue
            if self._inside(node, lo, hi):
                nodes.append(node)
                continue
            if node.left is None:
                loose.extend(k for k in self.perm[node.start:node.end] if self._point_in(k, lo, hi))
                continue
            stack.append(node.right)
            stack.append(node.left)
        return nodes, loose

    def query(self, lo, hi, mode="report"):
        if mode == "empty":
            return not self._any(lo, hi)
        nodes, loose = self.canonical(lo, hi)
        if mode == "count":
            return sum(node.count for node in nodes) + len(loose)
        out = [int(self.ids[k]) for node in nodes for k in self.perm[node.start:node.end]]
        out.extend(int(self.ids[k]) for k in loose)
        return sorted(out)

    def _any(self, lo, hi):
        if self.root is None:
            return False
        stack = [self.root]
        while stack:
            node = stack.pop()
            if self._disjoint(node, lo, hi):
                continue
            if self._inside(node, lo, hi):
                return True
            if node.left is None:
                if any(self._point_in(k, lo, hi) for k in self.perm[node.start:node.end]):
                    return True
                continue
            stack.append(node.right)
            stack.append(node.left)
        return False

    def add_to_box(self, lo, hi, amount, counters):
        """Add `amount` to every point in the box: canonical nodes lazily, loose points directly."""
        nodes, loose = self.canonical(lo, hi)
        for node in nodes:
            node.pending += amount
        for k in loose:
            counters[int(self.ids[k])] += amount
        return sum(node.count for node in nodes) + len(loose)

    def flush(self, counters):
        """Push pending canonical-subset counters down to the points."""
        if self.root is None:
            return
        stack = [(self.root, 0)]
        while stack:
            node, carried = stack.pop()
            carried += node.pending
            node.pending = 0
            if node.left is None:
                if carried:
                    for k in self.perm[node.start:node.end]:
                        counters[int(self.ids[k])] += carried
                continue
            stack.append((node.left, carried))
            stack.append((node.right, carried))


class GroupedRangeTree:
    """RangeTrees over consecutive groups of at most `group_size` points."""

    def __init__(self, coords, ids, group_size, meter=None):
        coords = np.asarray(coords, dtype=float)
        ids = np.asarray(ids)
        self.groups = [
            RangeTree(coords[s:s + group_size], ids[s:s + group_size], meter=meter)
            for s in range(0, len(coords), max(1, group_size))
        ]

    def query(self, lo, hi, mode="report"):
        if mode == "empty":
            return all(g.query(lo, hi, "empty") for g in self.groups)
        if mode == "count":
            return sum(g.query(lo, hi, "count") for g in self.groups)
        out = []
        for g in self.groups:
            out.extend(g.query(lo, hi, "report"))
        return sorted(out)

    def add_to_box(self, lo, hi, amount, counters):
        return sum(g.add_to_box(lo, hi, amount, counters) for g in self.groups)

    def flush(self, counters):
        for g in self.groups:
            g.flush(counters)
