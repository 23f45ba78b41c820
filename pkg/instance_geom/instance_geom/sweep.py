"""
Worst-case plane sweeps used as the terminal step of the adaptive reporting
and counting framework.

Horizontal segments are (x, x', y), vertical segments (xi, eta, eta'),
points (x, y) and rectangles (xlo, xhi, ylo, yhi). All intervals are
closed. Every sweep takes optional id lists restricting the input to a
subset; pairs and counts always refer to the original indices.

The sweeps do not count their comparisons one by one: the meter is
charged the comparison bound of each step instead, n ceil(log2(n + 1))
for sorting n events and ceil(log2(m + 1)) per operation on a sorted
structure holding m keys.
"""
import logging
import math
from bisect import bisect_left

from sortedcontainers import SortedList

logger = logging.getLogger(__name__)

# event priorities at equal sweep coordinate
OPEN, PROBE, CLOSE = 0, 1, 2


def _charge(meter, size):
    """Charge the comparison bound of one search in a sorted structure of `size` keys."""
    if meter is not None:
        meter.comparisons += max(1, math.ceil(math.log2(size + 1)))


def _ids(ids, n):
    return range(n) if ids is None else sorted(int(i) for i in ids)


def _sort_events(events, meter):
    events.sort()
    if meter is not None:
        meter.comparisons += len(events) * max(1, math.ceil(math.log2(len(events) + 1)))
    return events


def segint_sweep_pairs(horizontals, verticals, h_ids=None, v_ids=None, meter=None):
    """All crossing (horizontal, vertical) pairs by an x-sweep over horizontals ordered by y."""
    events = []
    for h in _ids(h_ids, len(horizontals)):
        x, x2, _ = horizontals[h]
        events.append((x, OPEN, h))
        events.append((x2, CLOSE, h))
    for v in _ids(v_ids, len(verticals)):
        events.append((verticals[v][0], PROBE, v))
    _sort_events(events, meter)

    active = SortedList()
    pairs = []
    for _, kind, k in events:
        if kind == OPEN:
            _charge(meter, len(active))
            active.add((horizontals[k][2], k))
        elif kind == CLOSE:
            _charge(meter, len(active))
            active.remove((horizontals[k][2], k))
        else:
            _, eta, eta2 = verticals[k]
            _charge(meter, len(active))
            for _, h in active.irange((eta, -math.inf), (eta2, math.inf)):
                pairs.append((h, k))
    pairs.sort()
    return pairs


def segint_sweep_counts(horizontals, verticals, h_ids=None, v_ids=None, meter=None):
    """
    Per-segment crossing counts without enumerating pairs: an x-sweep counts
    for every vertical, a y-sweep over active xi values counts for every
    horizontal. Returns two lists indexed like the input.
    """
    h_counts = [0] * len(horizontals)
    v_counts = [0] * len(verticals)
    hs = list(_ids(h_ids, len(horizontals)))
    vs = list(_ids(v_ids, len(verticals)))

    events = []
    for h in hs:
        x, x2, _ = horizontals[h]
        events.append((x, OPEN, h))
        events.append((x2, CLOSE, h))
    for v in vs:
        events.append((verticals[v][0], PROBE, v))
    _sort_events(events, meter)
    ys = SortedList()
    for _, kind, k in events:
        _charge(meter, len(ys))
        if kind == OPEN:
            ys.add(horizontals[k][2])
        elif kind == CLOSE:
            ys.remove(horizontals[k][2])
        else:
            _, eta, eta2 = verticals[k]
            v_counts[k] = ys.bisect_right(eta2) - ys.bisect_left(eta)

    events = []
    for v in vs:
        _, eta, eta2 = verticals[v]
        events.append((eta, OPEN, v))
        events.append((eta2, CLOSE, v))
    for h in hs:
        events.append((horizontals[h][2], PROBE, h))
    _sort_events(events, meter)
    xis = SortedList()
    for _, kind, k in events:
        _charge(meter, len(xis))
        if kind == OPEN:
            xis.add(verticals[k][0])
        elif kind == CLOSE:
            xis.remove(verticals[k][0])
        else:
            x, x2, _ = horizontals[k]
            h_counts[k] = xis.bisect_right(x2) - xis.bisect_left(x)
    return h_counts, v_counts


class IntervalStabber:
    """
    Segment tree over a fixed set of endpoint coordinates. Closed intervals
    whose endpoints are among the coordinates are inserted and removed by
    id; a stabbing query reports the ids of all intervals containing a value.

    Slot 2k+1 is the coordinate coords[k] itself, slot 2k the open gap
    below it, and slot 2m the gap above the last coordinate.
    """

    def __init__(self, coords, meter=None):
        self.coords = sorted(set(float(c) for c in coords))
        self.size = 2 * len(self.coords) + 1
        self.meter = meter
        self.buckets = [set() for _ in range(4 * self.size)]

    def slot(self, value):
        k = bisect_left(self.coords, value)
        _charge(self.meter, len(self.coords))
        if k < len(self.coords) and self.coords[k] == value:
            return 2 * k + 1
        return 2 * k

    def _span(self, lo, hi):
        return self.slot(lo), self.slot(hi)

    def _update(self, node, nlo, nhi, lo, hi, key, add):
        if hi < nlo or nhi < lo:
            return
        if lo <= nlo and nhi <= hi:
            if add:
                self.buckets[node].add(key)
            else:
                self.buckets[node].discard(key)
            return
        mid = (nlo + nhi) // 2
        self._update(2 * node, nlo, mid, lo, hi, key, add)
        self._update(2 * node + 1, mid + 1, nhi, lo, hi, key, add)

    def insert(self, lo, hi, key):
        a, b = self._span(lo, hi)
        self._update(1, 0, self.size - 1, a, b, key, True)

    def remove(self, lo, hi, key):
        a, b = self._span(lo, hi)
        self._update(1, 0, self.size - 1, a, b, key, False)

    def stab(self, value):
        s = self.slot(value)
        node, nlo, nhi = 1, 0, self.size - 1
        out = list(self.buckets[node])
        while nlo != nhi:
            mid = (nlo + nhi) // 2
            if s <= mid:
                node, nhi = 2 * node, mid
            else:
                node, nlo = 2 * node + 1, mid + 1
            out.extend(self.buckets[node])
        return out


def rangerep_sweep_pairs(points, rects, p_ids=None, r_ids=None, meter=None):
    """All (point, rectangle) containment pairs by an x-sweep with an interval stabber."""
    rs = list(_ids(r_ids, len(rects)))
    events = []
    for r in rs:
        events.append((rects[r][0], OPEN, r))
        events.append((rects[r][1], CLOSE, r))
    for p in _ids(p_ids, len(points)):
        events.append((points[p][0], PROBE, p))
    _sort_events(events, meter)

    stabber = IntervalStabber([c for r in rs for c in rects[r][2:]], meter)
    pairs = []
    for _, kind, k in events:
        if kind == OPEN:
            stabber.insert(rects[k][2], rects[k][3], k)
        elif kind == CLOSE:
            stabber.remove(rects[k][2], rects[k][3], k)
        else:
            pairs.extend((k, r) for r in stabber.stab(points[k][1]))
    pairs.sort()
    return pairs


def rangerep_sweep_counts(points, rects, p_ids=None, r_ids=None, meter=None):
    """
    Per-point and per-rectangle containment counts. A rectangle's count is
    the difference of two range counts taken when the sweep enters and
    leaves it; a point's count is the number of active rectangles with
    ylo <= y minus those with yhi < y.
    """
    p_counts = [0] * len(points)
    r_counts = [0] * len(rects)
    ps = list(_ids(p_ids, len(points)))
    rs = list(_ids(r_ids, len(rects)))

    events = []
    for r in rs:
        events.append((rects[r][0], OPEN, r))
        events.append((rects[r][1], CLOSE, r))
    for p in ps:
        events.append((points[p][0], PROBE, p))
    _sort_events(events, meter)

    seen = SortedList()
    lows, highs = SortedList(), SortedList()
    for _, kind, k in events:
        _charge(meter, len(seen) + len(lows))
        if kind == PROBE:
            y = points[k][1]
            seen.add(y)
            p_counts[k] = lows.bisect_right(y) - highs.bisect_left(y)
            continue
        _, _, ylo, yhi = rects[k]
        inside = seen.bisect_right(yhi) - seen.bisect_left(ylo)
        if kind == OPEN:
            r_counts[k] -= inside
            lows.add(ylo)
            highs.add(yhi)
        else:
            r_counts[k] += inside
            lows.remove(ylo)
            highs.remove(yhi)
    return p_counts, r_counts
