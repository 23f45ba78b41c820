"""
Comparison-model adversary for 2-d maxima.

Every input point p starts at the root of the k-d box tree of S. A
comparison either steps boxes down the tree until it is decided by the
split medians, or is answered from actual coordinates once both points
are fixed. A point is fixed to an unassigned point of S as soon as its box
becomes a leaf. After the algorithm finishes, remaining points are pushed
to leaves, which yields a permutation of S consistent with every answer.
"""
import logging
from dataclasses import dataclass, field

from instance_geom.config import DEFAULT_C_AMORT, default_seed, make_rng
from instance_geom.entropy import entropy_of_sizes, kd_tree
from instance_geom.errors import AdversaryInvariantError, ConfigError, GeometryError
from instance_geom.maxima import (
    bruteforce_from_access,
    maxima_from_access,
    maxima_oracle,
    sortscan_from_access,
)
from instance_geom.meter import CostMeter, PointAccess
from instance_geom.points import PointSequence

logger = logging.getLogger(__name__)

ALGORITHMS = {
    "maxima2d": lambda access, rng: maxima_from_access(access, rng=rng),
    "maxima2d-left": lambda access, rng: maxima_from_access(access, rng=rng, prune="left"),
    "sortscan": lambda access, rng: sortscan_from_access(access),
    "bruteforce": lambda access, rng: bruteforce_from_access(access),
}


@dataclass
class AdversaryReport:
    n: int
    T: int
    D: int
    ordinary: int
    exceptional: int
    h_kd: float
    replay_ok: bool
    sound: bool
    sigma: list = field(default_factory=list)

    @property
    def force_ratio(self):
        """T / (n * h_kd); infinite when the k-d partition has zero entropy."""
        denom = self.n * self.h_kd
        return self.T / denom if denom else float("inf")

    def amortized_ok(self, c_amort=DEFAULT_C_AMORT):
        return self.T * c_amort >= self.D and self.exceptional <= self.ordinary

    def to_json(self):
        return {
            "T": self.T,
            "D": self.D,
            "ordinary": self.ordinary,
            "exceptional": self.exceptional,
            "h_kd": self.h_kd,
            "replay_ok": self.replay_ok,
            "sound": self.sound,
            "sigma": list(self.sigma),
        }


class AdversaryState:
    def __init__(self, S):
        self.S = S
        self.tree = kd_tree(S, "maxima2d")
        n = len(S)
        self.count = [0] * len(self.tree.nodes)
        self.box = [self.tree.root] * n
        self.fixed = {}
        self.assigned = set()
        self.ordinary = 0
        self.exceptional = 0
        self.depth_sum = 0
        self.comparisons = 0
        self.log = []
        if n:
            self.count[self.tree.root.id] = n
            if self.tree.root.leaf:
                for p in range(n):
                    self._fix(p)

    def full(self, node):
        return self.count[node.id] >= node.size

    def _fix(self, p):
        leaf = self.box[p]
        for s in sorted(leaf.idx):
            if s not in self.assigned:
                self.fixed[p] = s
                self.assigned.add(s)
                return
        raise AdversaryInvariantError(f"leaf {leaf!r} has no unassigned point for input {p}")

    def _step(self, p, child, exceptional):
        if self.full(child):
            raise AdversaryInvariantError(f"stepping input {p} into full node {child!r}")
        self.box[p] = child
        self.count[child.id] += 1
        self.depth_sum += 1
        if exceptional:
            self.exceptional += 1
        else:
            self.ordinary += 1
        if child.leaf:
            self._fix(p)

    def _nonfull_child(self, node):
        for child in (node.left, node.right):
            if not self.full(child):
                return child
        raise AdversaryInvariantError(f"both children of {node!r} are full")

    def compare(self, i, j, axis):
        """Declared outcome of S[i][axis] < S[j][axis] for input points i and j."""
        if i == j:
            raise GeometryError(f"cannot compare input {i} with itself")
        self.comparisons += 1
        outcome = self._resolve(i, j, axis)
        self.log.append((i, j, axis, outcome))
        return outcome

    def _resolve(self, i, j, axis):
        while True:
            fi, fj = i in self.fixed, j in self.fixed
            if fi and fj:
                return self.S[self.fixed[i]][axis] < self.S[self.fixed[j]][axis]

            stepped = False
            for p in (i, j):
                if p not in self.fixed and self.box[p].axis != axis:
                    self._step(p, self._nonfull_child(self.box[p]), exceptional=False)
                    stepped = True
            if stepped:
                continue

            if fi or fj:
                known, other = (i, j) if fi else (j, i)
                node = self.box[other]
                value = self.S[self.fixed[known]][axis]
                want, alt = (node.right, node.left) if value <= node.split else (node.left, node.right)
                if self.full(want):
                    self._step(other, alt, exceptional=True)
                    continue
                self._step(other, want, exceptional=False)
                other_larger = want is node.right
                return other_larger if other == j else not other_larger

            bi, bj = self.box[i], self.box[j]
            if bi.split < bj.split or (bi.split == bj.split and i < j):
                lo, hi = i, j
            else:
                lo, hi = j, i
            lo_node, hi_node = self.box[lo], self.box[hi]
            if self.full(lo_node.left):
                self._step(lo, lo_node.right, exceptional=True)
                continue
            if self.full(hi_node.right):
                self._step(hi, hi_node.left, exceptional=True)
                continue
            self._step(lo, lo_node.left, exceptional=False)
            self._step(hi, hi_node.right, exceptional=False)
            return lo == i

    def finalize(self):
        """Push every unfixed input to a leaf through non-full children."""
        for p in range(len(self.box)):
            while p not in self.fixed:
                node = self.box[p]
                child = self._nonfull_child(node)
                self.box[p] = child
                self.count[child.id] += 1
                if child.leaf:
                    self._fix(p)
        return [self.fixed[p] for p in range(len(self.box))]

    def check_invariants(self):
        nodes = self.tree.nodes
        expected = [0] * len(nodes)
        for node in self.box:
            while node is not None:
                expected[node.id] += 1
                node = node.parent
        if expected != self.count:
            raise AdversaryInvariantError("n(B) counters disagree with the current boxes")
        for node in nodes:
            if self.count[node.id] > node.size:
                raise AdversaryInvariantError(f"n(B) exceeds |S & B| at {node!r}")
        values = list(self.fixed.values())
        if len(set(values)) != len(values):
            raise AdversaryInvariantError("two inputs fixed to the same point")
        for p, s in self.fixed.items():
            if not self.box[p].leaf or s not in self.box[p].idx:
                raise AdversaryInvariantError(f"input {p} fixed outside its leaf")
        return True


class AdversaryAccess:
    """Comparison oracle answering through an AdversaryState."""

    def __init__(self, state, meter=None):
        self.state = state
        self.meter = meter if meter is not None else CostMeter()

    def __len__(self):
        return len(self.state.box)

    def less(self, i, j, axis):
        self.meter.comparisons += 1
        return self.state.compare(int(i), int(j), axis)

    def dominates(self, i, j):
        self.meter.dominance_tests += 1
        return self.less(j, i, 0) and self.less(j, i, 1)


def adversary_session(S, algorithm="maxima2d", seed=None, state_checks=False):
    """
    Run `algorithm` (a name from ALGORITHMS or a callable taking an access
    object and a generator) against the adversary and finalize the input.
    """
    S.require(dim=2)
    if isinstance(algorithm, str):
        if algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown adversary algorithm {algorithm!r}")
        run = ALGORITHMS[algorithm]
    else:
        run = algorithm
    seed = default_seed() if seed is None else seed

    state = AdversaryState(S)
    access = AdversaryAccess(state)
    run(access, make_rng(seed))
    if state_checks:
        state.check_invariants()
    T, D = state.comparisons, state.depth_sum
    sigma = state.finalize()
    if state_checks:
        state.check_invariants()

    permuted = PointSequence([S[s] for s in sigma], S.meta)
    sound = all(
        (permuted[i][axis] < permuted[j][axis]) == outcome for i, j, axis, outcome in state.log
    )
    maximal, _ = run(PointAccess(permuted), make_rng(seed))
    truth = set(maxima_oracle(S, "sortscan").maximal)
    replay_ok = {sigma[p] for p in maximal} == truth

    h_kd = entropy_of_sizes([leaf.size for leaf in state.tree.leaves()])
    report = AdversaryReport(
        n=len(S),
        T=T,
        D=D,
        ordinary=state.ordinary,
        exceptional=state.exceptional,
        h_kd=h_kd,
        replay_ok=replay_ok,
        sound=sound,
        sigma=sigma,
    )
    logger.info(
        "adversary: n=%d T=%d D=%d ordinary=%d exceptional=%d replay_ok=%s",
        report.n, T, D, report.ordinary, report.exceptional, replay_ok,
    )
    return report
