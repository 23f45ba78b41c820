import logging
from dataclasses import dataclass, field
from functools import cmp_to_key

from instance_geom.config import make_rng
from instance_geom.errors import ConfigError
from instance_geom.meter import CostMeter, PointAccess, select_kth

logger = logging.getLogger(__name__)

X, Y = 0, 1


@dataclass
class MaximaResult:
    maximal: list
    witness: dict = field(default_factory=dict)
    meter: CostMeter = field(default_factory=CostMeter)

    def to_json(self):
        return {
            "maximal": list(self.maximal),
            "witness": sorted([int(k), int(v)] for k, v in self.witness.items()),
            "meter": self.meter.to_json(),
        }


def compress_witnesses(witness):
    """
    Path-compress a witness map so every value is a final (unwitnessed)
    index. Uses only the recorded dominations.
    """
    out = {}
    for start in witness:
        path = []
        node = start
        while node in witness and node not in out:
            path.append(node)
            node = witness[node]
        root = out[node] if node in out else node
        for p in path:
            out[p] = root
    return out


def maxima_from_access(access, rng=None, prune="both"):
    """
    Divide and prune over an abstract comparator: only `access.less` and
    `access.dominates` are consulted, so any comparison oracle can drive it.
    Returns (maximal indices in x order, witness map).
    """
    if prune not in ("both", "left"):
        raise ConfigError(f"unknown prune mode {prune!r}")
    rng = make_rng(rng)
    witness = {}

    def less_x(a, b):
        return access.less(a, b, X)

    def solve(Q):
        if len(Q) <= 1:
            return list(Q)
        m = select_kth(Q, (len(Q) - 1) // 2, less_x, rng=rng)
        left, right = [m], []
        for i in Q:
            if i == m:
                continue
            if less_x(i, m):
                left.append(i)
            else:
                right.append(i)

        q = right[0]
        for i in right[1:]:
            if access.less(q, i, Y):
                q = i

        kept_left = []
        for i in left:
            if access.dominates(q, i):
                witness[i] = q
            else:
                kept_left.append(i)

        if prune == "left":
            return solve(kept_left) + solve(right)

        kept_right = []
        for i in right:
            if i == q:
                continue
            if access.dominates(q, i):
                witness[i] = q
            else:
                kept_right.append(i)
        return solve(kept_left) + [q] + solve(kept_right)

    maximal = solve(list(range(len(access))))
    return maximal, compress_witnesses(witness)


def maxima2d(seq, meter=None, rng=None, prune="both"):
    seq.require(dim=2)
    meter = meter if meter is not None else CostMeter()
    access = PointAccess(seq, meter)
    with meter.timed():
        maximal, witness = maxima_from_access(access, rng=rng, prune=prune)
    logger.debug("maxima2d: n=%d h=%d comparisons=%d", len(seq), len(maximal), meter.comparisons)
    return MaximaResult(maximal, witness, meter)


def sortscan_from_access(access):
    """Sort by x descending and keep the running max-y point."""
    order = sorted(
        range(len(access)),
        key=cmp_to_key(lambda a, b: -1 if access.less(b, a, X) else 1),
    )
    if not order:
        return [], {}
    best = order[0]
    maximal = [best]
    witness = {}
    for i in order[1:]:
        if access.less(best, i, Y):
            best = i
            maximal.append(i)
        else:
            witness[i] = best
    maximal.reverse()
    return maximal, witness


def bruteforce_from_access(access):
    n = len(access)
    maximal = [
        i for i in range(n) if not any(j != i and access.dominates(j, i) for j in range(n))
    ]
    maximal.sort(key=cmp_to_key(lambda a, b: -1 if access.less(a, b, X) else 1))
    witness = {}
    for i in range(n):
        if i in maximal:
            continue
        for j in maximal:
            if access.dominates(j, i):
                witness[i] = j
                break
    return maximal, witness


def maxima_oracle(seq, method="sortscan", meter=None):
    seq.require(dim=2)
    meter = meter if meter is not None else CostMeter()
    access = PointAccess(seq, meter)
    with meter.timed():
        if method == "bruteforce":
            maximal, witness = bruteforce_from_access(access)
        elif method == "sortscan":
            maximal, witness = sortscan_from_access(access)
        else:
            raise ConfigError(f"unknown maxima oracle {method!r}")
    return MaximaResult(maximal, witness, meter)
