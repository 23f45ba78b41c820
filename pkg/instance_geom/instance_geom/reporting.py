"""
Adaptive red/blue reporting and counting.

A relation maps each red point to a box of interacting blue points and
each blue point to a box of interacting red points; both boxes are read
from per-axis interval tables. The framework runs rounds with growing cell
counts: the points of one color are split by a median k-d partition, every
cell that is safe (all its points interact with the same opposite subset)
is answered through one representative and pruned, then the colors swap.
Whatever survives the rounds is handed to a worst-case plane sweep.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from instance_geom.config import DEFAULT_CAP_EXPONENT, DEFAULT_DELTA, make_rng, round_schedule
from instance_geom.entropy import RespectfulPartition
from instance_geom.errors import ConfigError, GeometryError
from instance_geom.instances import RangeInstance, SegmentSet
from instance_geom.kdtree import GroupedRangeTree, RangeTree, median_partition, median_split
from instance_geom.meter import CostMeter, PointAccess
from instance_geom.points import BoxD
from instance_geom import sweep

logger = logging.getLogger(__name__)

COLORS = ("red", "blue")
MIN_GROUP_SIZE = 64
PAIR_CAP = 1000


@dataclass(frozen=True)
class Relation:
    """
    Interval tables: `red_space[k]` gives, for red axis k, the (lo, hi)
    blue coordinate indices bounding the red points a blue point interacts
    with; None is unbounded. `blue_space` is the same from the red side.
    """

    name: str
    red_dim: int
    blue_dim: int
    red_space: tuple
    blue_space: tuple

    def dim(self, color):
        return self.red_dim if color == "red" else self.blue_dim

    def space(self, color):
        """Interval table over the axes of `color`, indexed by opposite coordinates."""
        return self.red_space if color == "red" else self.blue_space

    def query_box(self, color, point):
        """Box in the opposite space holding exactly the points that interact with `point`."""
        table = self.space(opposite(color))
        lo = tuple(-math.inf if a is None else float(point[a]) for a, _ in table)
        hi = tuple(math.inf if b is None else float(point[b]) for _, b in table)
        return lo, hi

    def interacts(self, red, blue):
        lo, hi = self.query_box("red", red)
        return all(a <= c <= b for a, c, b in zip(lo, blue, hi))


SEGINT = Relation(
    "segint",
    red_dim=3,
    blue_dim=3,
    # red (x, x', y) meets blue (xi, eta, eta') iff x <= xi <= x' and eta <= y <= eta'
    red_space=((None, 0), (0, None), (1, 2)),
    blue_space=((0, 1), (None, 2), (2, None)),
)

RANGEREP = Relation(
    "rangerep",
    red_dim=2,
    blue_dim=4,
    # red (x, y) meets blue (xlo, xhi, ylo, yhi) iff the point is in the rectangle
    red_space=((0, 1), (2, 3)),
    blue_space=((None, 0), (0, None), (None, 1), (1, None)),
)

RELATIONS = {r.name: r for r in (SEGINT, RANGEREP)}


def opposite(color):
    if color not in COLORS:
        raise ConfigError(f"unknown color {color!r}")
    return "blue" if color == "red" else "red"


@dataclass
class RelationInstance:
    red: list
    blue: list
    relation: Relation
    meta: dict = field(default_factory=dict)

    def points(self, color):
        return self.red if color == "red" else self.blue

    def interacts(self, i, j):
        """Red index i against blue index j."""
        return self.relation.interacts(self.red[i], self.blue[j])

    def decode(self):
        """The raw segment set or range instance this instance was encoded from."""
        if self.relation is SEGINT:
            return SegmentSet(self.red, self.blue, self.meta)
        return RangeInstance(self.red, self.blue, self.meta)

    def __len__(self):
        return len(self.red) + len(self.blue)


@dataclass
class PairReport:
    pairs: list
    K: int
    meter: CostMeter = field(default_factory=CostMeter)
    extra: dict = field(default_factory=dict)

    def to_json(self, cap=PAIR_CAP):
        return {
            "K": self.K,
            "pairs": [list(p) for p in self.pairs[:cap]],
            "truncated": self.K > cap,
            "meter": self.meter.to_json(),
            **self.extra,
        }


@dataclass
class CountReport:
    total: int
    red_counts: list = None
    blue_counts: list = None
    meter: CostMeter = field(default_factory=CostMeter)
    extra: dict = field(default_factory=dict)

    def to_json(self):
        out = {"total": self.total, "meter": self.meter.to_json(), **self.extra}
        if self.red_counts is not None:
            out["red_counts"] = list(self.red_counts)
            out["blue_counts"] = list(self.blue_counts)
        return out


def encode_relation(raw):
    """
    Parameter-space points for a SegmentSet (horizontals red in R^3,
    verticals blue in R^3) or a RangeInstance (points red in R^2,
    rectangles blue in R^4).
    """
    if isinstance(raw, SegmentSet):
        raw.validate()
        return RelationInstance(list(raw.horizontals), list(raw.verticals), SEGINT, dict(raw.meta))
    if isinstance(raw, RangeInstance):
        raw.validate()
        return RelationInstance(list(raw.points), list(raw.rects), RANGEREP, dict(raw.meta))
    if isinstance(raw, tuple) and len(raw) == 2:
        return encode_relation(RangeInstance(*raw))
    raise ConfigError(f"cannot encode {type(raw).__name__} as a relation instance")


def build_tree(instance, color, ids=None, meter=None, group_size=None):
    """Oracle (B) structure over the points of `color` restricted to `ids`."""
    pts = instance.points(color)
    ids = list(range(len(pts))) if ids is None else sorted(ids)
    coords = np.asarray([pts[i] for i in ids], dtype=float).reshape(len(ids), instance.relation.dim(color))
    if group_size is None:
        return RangeTree(coords, ids, meter=meter)
    return GroupedRangeTree(coords, ids, group_size, meter=meter)


def _bounds(box):
    if isinstance(box, BoxD):
        return box.lo, box.hi
    return box


def kd_box_query(tree, box, mode="report"):
    """Emptiness, sorted report or count of the tree's points inside a closed box."""
    if mode not in ("empty", "report", "count"):
        raise ConfigError(f"unknown query mode {mode!r}")
    lo, hi = _bounds(box)
    return tree.query(lo, hi, mode)


def boundary_queries(relation, color, box):
    """
    Boxes in the opposite space whose points split `box`: an opposite point
    q splits the box when its interaction region meets the box and one of
    its interval endpoints falls strictly inside the box along some axis.
    """
    lo, hi = _bounds(box)
    table = relation.space(color)
    odim = relation.dim(opposite(color))
    base_lo = [-math.inf] * odim
    base_hi = [math.inf] * odim
    # region meets box: a_k <= hi_k(q) and lo_k(q) <= A_k on every axis
    for k, (qa, qb) in enumerate(table):
        if qb is not None:
            base_lo[qb] = max(base_lo[qb], lo[k])
        if qa is not None:
            base_hi[qa] = min(base_hi[qa], hi[k])

    out = []
    for k, (qa, qb) in enumerate(table):
        if qa is not None:
            qlo, qhi = list(base_lo), list(base_hi)
            qlo[qa] = max(qlo[qa], float(np.nextafter(lo[k], math.inf)))
            out.append((tuple(qlo), tuple(qhi)))
        if qb is not None:
            qlo, qhi = list(base_lo), list(base_hi)
            qhi[qb] = min(qhi[qb], float(np.nextafter(hi[k], -math.inf)))
            out.append((tuple(qlo), tuple(qhi)))
    return [(a, b) for a, b in out if all(x <= y for x, y in zip(a, b))]


def safety_test(instance, color, box, tree=None, meter=None):
    """
    Oracle (C): True when every point of `color` inside `box` interacts with
    the same opposite points. Conservative: a True answer is always sound.
    `tree` defaults to a range tree over all opposite points.
    """
    lo, hi = _bounds(box)
    if len(lo) != instance.relation.dim(color):
        raise GeometryError(f"{color} box has dimension {len(lo)}, expected {instance.relation.dim(color)}")
    if all(a == b for a, b in zip(lo, hi)):
        return True
    if tree is None:
        tree = build_tree(instance, opposite(color), meter=meter)
    return all(tree.query(qlo, qhi, "empty") for qlo, qhi in boundary_queries(instance.relation, color, box))


def semantic_safety(instance, color, box):
    """Brute-force safety from the definition, over the points inside the box."""
    box = box if isinstance(box, BoxD) else BoxD(*box)
    pts = instance.points(color)
    inside = [i for i, p in enumerate(pts) if box.contains(p)]
    other = instance.points(opposite(color))
    signatures = set()
    for i in inside:
        lo, hi = instance.relation.query_box(color, pts[i])
        signatures.add(frozenset(j for j, q in enumerate(other) if all(a <= c <= b for a, c, b in zip(lo, q, hi))))
    return len(signatures) <= 1


def relation_bruteforce(instance):
    return sorted(
        (i, j) for i in range(len(instance.red)) for j in range(len(instance.blue)) if instance.interacts(i, j)
    )


def count_bruteforce(instance):
    red = [0] * len(instance.red)
    blue = [0] * len(instance.blue)
    for i, j in relation_bruteforce(instance):
        red[i] += 1
        blue[j] += 1
    return red, blue


def _sweep_pairs(instance, red_ids, blue_ids, meter):
    if instance.relation is SEGINT:
        return sweep.segint_sweep_pairs(instance.red, instance.blue, red_ids, blue_ids, meter)
    return sweep.rangerep_sweep_pairs(instance.red, instance.blue, red_ids, blue_ids, meter)


def _sweep_counts(instance, red_ids, blue_ids, meter):
    if instance.relation is SEGINT:
        return sweep.segint_sweep_counts(instance.red, instance.blue, red_ids, blue_ids, meter)
    return sweep.rangerep_sweep_counts(instance.red, instance.blue, red_ids, blue_ids, meter)


def segint_sweep_oracle(segments, meter=None):
    """Oracle (A) for segment intersection: worst-case O(n log n + K)."""
    meter = meter if meter is not None else CostMeter()
    with meter.timed():
        pairs = sweep.segint_sweep_pairs(segments.horizontals, segments.verticals, meter=meter)
    logger.debug("segint sweep: n=%d K=%d", len(segments), len(pairs))
    return PairReport(pairs, len(pairs), meter)


def rangerep_sweep_oracle(instance, meter=None):
    """Oracle (A) for off-line orthogonal range reporting."""
    meter = meter if meter is not None else CostMeter()
    with meter.timed():
        pairs = sweep.rangerep_sweep_pairs(instance.points, instance.rects, meter=meter)
    logger.debug("rangerep sweep: n=%d K=%d", len(instance), len(pairs))
    return PairReport(pairs, len(pairs), meter)


class _Rounds:
    """
    Shared driver for reporting and counting. `on_safe(color, cell, rep,
    tree)` answers a safe cell against the current opposite tree.
    """

    def __init__(self, instance, meter, rng, delta, cap):
        self.instance = instance
        self.meter = meter
        self.rng = make_rng(rng)
        self.alive = {c: set(range(len(instance.points(c)))) for c in COLORS}
        self.access = {c: PointAccess(instance.points(c), meter) for c in COLORS}
        n = len(instance)
        self.schedule = round_schedule(n, delta, cap)
        self.stats = []

    def run(self, on_safe, after_pass=None):
        for j, r in enumerate(self.schedule):
            group = max(MIN_GROUP_SIZE, r)
            for color in COLORS:
                other = opposite(color)
                if not self.alive[color]:
                    continue
                tree = build_tree(self.instance, other, self.alive[other], self.meter, group)
                depth = max(1, math.ceil(math.log2(r)))
                dim = self.instance.relation.dim(color)
                cells = median_partition(self.access[color], sorted(self.alive[color]), depth, dim, self.rng)
                before = len(self.alive[color])
                pruned_cells = 0
                pts = self.instance.points(color)
                for cell in cells:
                    if not cell:
                        continue
                    box = BoxD.bounding([pts[i] for i in cell])
                    if not safety_test(self.instance, color, box, tree):
                        continue
                    on_safe(color, cell, min(cell), tree)
                    self.alive[color].difference_update(cell)
                    pruned_cells += 1
                if after_pass is not None:
                    after_pass(color, tree)
                self.stats.append(
                    {"round": j, "r": r, "color": color, "before": before,
                     "after": len(self.alive[color]), "pruned_cells": pruned_cells}
                )
                logger.debug(
                    "round %d r=%d %s: %d -> %d (%d safe cells)",
                    j, r, color, before, len(self.alive[color]), pruned_cells,
                )
        return sorted(self.alive["red"]), sorted(self.alive["blue"])


def report_adaptive(instance, meter=None, rng=None, delta=DEFAULT_DELTA, cap=DEFAULT_CAP_EXPONENT):
    """All interacting (red, blue) pairs, pruning safe cells round by round."""
    meter = meter if meter is not None else CostMeter()
    pairs = []

    def on_safe(color, cell, rep, tree):
        lo, hi = instance.relation.query_box(color, instance.points(color)[rep])
        Z = kd_box_query(tree, (lo, hi), "report")
        if color == "red":
            pairs.extend((i, z) for i in cell for z in Z)
        else:
            pairs.extend((z, i) for i in cell for z in Z)

    with meter.timed():
        rounds = _Rounds(instance, meter, rng, delta, cap)
        red_left, blue_left = rounds.run(on_safe)
        pairs.extend(_sweep_pairs(instance, red_left, blue_left, meter))
    pairs.sort()
    logger.info(
        "report_adaptive %s: n=%d K=%d survivors=%d+%d cost=%d",
        instance.relation.name, len(instance), len(pairs), len(red_left), len(blue_left), meter.cost,
    )
    return PairReport(
        pairs, len(pairs), meter,
        {"rounds": rounds.stats, "survivors": {"red": len(red_left), "blue": len(blue_left)}},
    )


def count_adaptive(instance, mode="total", meter=None, rng=None, delta=DEFAULT_DELTA, cap=DEFAULT_CAP_EXPONENT):
    """
    Interaction counts without enumerating pairs. "total" returns K only;
    "individual" also returns per-point counts for both colors, pushing
    cell sizes onto canonical subsets of the opposite tree.
    """
    if mode not in ("total", "individual"):
        raise ConfigError(f"unknown count mode {mode!r}")
    meter = meter if meter is not None else CostMeter()
    counts = {"red": [0] * len(instance.red), "blue": [0] * len(instance.blue)}
    total = 0

    def on_safe(color, cell, rep, tree):
        nonlocal total
        lo, hi = instance.relation.query_box(color, instance.points(color)[rep])
        if mode == "total":
            total += len(cell) * kd_box_query(tree, (lo, hi), "count")
            return
        z = tree.add_to_box(lo, hi, len(cell), counts[opposite(color)])
        total += len(cell) * z
        for i in cell:
            counts[color][i] += z

    def after_pass(color, tree):
        if mode == "individual":
            tree.flush(counts[opposite(color)])

    with meter.timed():
        rounds = _Rounds(instance, meter, rng, delta, cap)
        red_left, blue_left = rounds.run(on_safe, after_pass)
        red_tail, blue_tail = _sweep_counts(instance, red_left, blue_left, meter)
        total += sum(red_tail)
        for i in red_left:
            counts["red"][i] += red_tail[i]
        for j in blue_left:
            counts["blue"][j] += blue_tail[j]
    logger.info("count_adaptive %s (%s): n=%d K=%d cost=%d", instance.relation.name, mode, len(instance), total, meter.cost)
    if mode == "total":
        return CountReport(total, meter=meter, extra={"rounds": rounds.stats})
    return CountReport(total, counts["red"], counts["blue"], meter, {"rounds": rounds.stats})


def safety_partition(instance, color, rng=None, meter=None):
    """
    Median k-d partition of one color whose leaves are safe boxes or
    singletons; its entropy is the difficulty diagnostic for the relation.
    """
    pts = instance.points(color)
    dim = instance.relation.dim(color)
    access = PointAccess(pts, meter)
    tree = build_tree(instance, opposite(color), meter=meter)
    rng = make_rng(rng)
    subsets, enclosures = [], []
    stack = [(list(range(len(pts))), 0)] if pts else []
    while stack:
        cell, depth = stack.pop()
        if len(cell) == 1:
            subsets.append(cell)
            enclosures.append(None)
            continue
        box = BoxD.bounding([pts[i] for i in cell])
        if safety_test(instance, color, box, tree):
            subsets.append(sorted(cell))
            enclosures.append(box)
            continue
        left, right = median_split(access, cell, depth % dim, rng)
        stack.append((right, depth + 1))
        stack.append((left, depth + 1))
    return RespectfulPartition(subsets, enclosures, "relation-safe")
