"""
Cost accounting. Every algorithm reads its input through a PointAccess,
which charges a CostMeter for each coordinate comparison and predicate.
"""
import logging
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass

import numpy as np

from instance_geom import predicates
from instance_geom.config import make_rng
from instance_geom.errors import DegenerateInputError, RankError

logger = logging.getLogger(__name__)


@dataclass
class CostMeter:
    comparisons: int = 0
    orient2d_calls: int = 0
    orient3d_calls: int = 0
    dominance_tests: int = 0
    wall_ns: int = 0

    @property
    def cost(self):
        """Comparisons plus orientation predicates."""
        return self.comparisons + self.orient2d_calls + self.orient3d_calls

    def merge(self, other):
        self.comparisons += other.comparisons
        self.orient2d_calls += other.orient2d_calls
        self.orient3d_calls += other.orient3d_calls
        self.dominance_tests += other.dominance_tests
        self.wall_ns += other.wall_ns
        return self

    def counters(self):
        """Counters without wall time, for determinism checks."""
        out = asdict(self)
        del out["wall_ns"]
        return out

    def to_json(self):
        return asdict(self)

    @contextmanager
    def timed(self):
        start = time.perf_counter_ns()
        try:
            yield self
        finally:
            self.wall_ns += time.perf_counter_ns() - start


def _is_index(x):
    return isinstance(x, (int, np.integer))


class PointAccess:
    """
    Instrumented view of a point sequence. Arguments are indices into the
    sequence or, for probes that are not input points, coordinate tuples.

    A strict view raises DegenerateInputError when the orientation test of
    the input's own dimension returns 0 on input points only.
    """

    def __init__(self, points, meter=None, strict=False):
        self.points = points
        self.meter = meter if meter is not None else CostMeter()
        self.strict = strict
        self.dim = getattr(points, "dim", None)

    def __len__(self):
        return len(self.points)

    def _pt(self, x):
        return self.points[x] if _is_index(x) else x

    def less(self, i, j, axis):
        self.meter.comparisons += 1
        return self._pt(i)[axis] < self._pt(j)[axis]

    def dominates(self, i, j):
        """Strict dominance in 2-d, charged as one test plus its two comparisons."""
        self.meter.dominance_tests += 1
        return self.less(j, i, 0) and self.less(j, i, 1)

    def _degenerate(self, args, dim):
        if self.strict and self.dim == dim and all(_is_index(x) for x in args):
            ids = tuple(int(x) for x in args)
            what = "collinear" if dim == 2 else "coplanar"
            raise DegenerateInputError(f"points {ids} are {what}", indices=ids)

    def orient2d(self, a, b, c):
        self.meter.orient2d_calls += 1
        sign = predicates.orient2d(self._pt(a), self._pt(b), self._pt(c))
        if sign == 0:
            self._degenerate((a, b, c), 2)
        return sign

    def orient3d(self, a, b, c, d):
        self.meter.orient3d_calls += 1
        sign = predicates.orient3d(self._pt(a), self._pt(b), self._pt(c), self._pt(d))
        if sign == 0:
            self._degenerate((a, b, c, d), 3)
        return sign


def select_kth(items, k, less, meter=None, rng=None):
    """
    Rank-k item (0-based) under the strict order `less`, by randomized
    quickselect. Comparisons are charged to `meter` when one is given.
    """
    items = list(items)
    if not 0 <= k < len(items):
        raise RankError(f"rank {k} out of range for {len(items)} items")
    rng = make_rng(rng)
    while len(items) > 1:
        p = int(rng.integers(len(items)))
        pivot = items[p]
        lows, highs = [], []
        for idx, item in enumerate(items):
            if idx == p:
                continue
            if meter is not None:
                meter.comparisons += 1
            if less(item, pivot):
                lows.append(item)
            else:
                highs.append(item)
        if k < len(lows):
            items = lows
        elif k == len(lows):
            return pivot
        else:
            k -= len(lows) + 1
            items = highs
    return items[0]
