"""
Named acceptance presets. Each preset runs a fixed, seeded workload and
returns a PresetResult; `full=True` switches to the complete ladders.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from instance_geom import predicates
from instance_geom.adversary import adversary_session
from instance_geom.bench import ExperimentConfig, fit_scaling, geometric_ladder, permute, run_experiment
from instance_geom.config import (
    BRUTEFORCE_MAX_N,
    EASY_BAND,
    HARD_BAND,
    HULL2D_ENTROPY_CONSTANT,
    HULL3D_EASY_BAND,
    MAXIMA_ENTROPY_CONSTANT,
    MEASURE_CONSTANT,
    RANDOM_ORDER_RATIO,
    SANDWICH_CONSTANT,
    DEFAULT_C_AMORT,
    DEFAULT_C_LB,
    DEFAULT_CAP_EXPONENT,
    HULL3D_PRUNE_CELLS,
    HULL3D_PRUNED_FRACTION,
)
from instance_geom.entropy import (
    RespectfulPartition,
    entropy_of_sizes,
    f_measure,
    is_respectful,
    kd_respectful_partition,
    structural_entropy_bruteforce,
    vertical_partition,
)
from instance_geom.errors import ConfigError
from instance_geom.hull2d import hull2d, hull2d_oracle
from instance_geom.hull3d import hull3d, hull3d_oracle
from instance_geom.instances import InstanceSpec, generate
from instance_geom.maxima import maxima2d, maxima_oracle
from instance_geom.meter import CostMeter
from instance_geom.points import BoxD, PointSequence
from instance_geom.reporting import (
    count_adaptive,
    count_bruteforce,
    encode_relation,
    relation_bruteforce,
    report_adaptive,
)

logger = logging.getLogger(__name__)

# Staircase A, B, C with three dominated points per vertical strip. The
# partition {A}, seven points boxed under B, four points boxed under C is
# respectful.
THREE_PARTITION_POINTS = PointSequence(
    [
        (1.0, 10.0), (0.2, 3.0), (0.5, 5.0), (0.8, 1.0),
        (6.0, 6.0), (2.0, 4.0), (3.0, 5.5), (5.0, 0.5),
        (10.0, 2.0), (7.0, 1.5), (8.0, 0.2), (9.0, 1.2),
    ]
)
THREE_PARTITION_SUBSETS = [[0], [1, 2, 3, 4, 5, 6, 7], [8, 9, 10, 11]]
THREE_PARTITION_ENTROPY = 1.281

# Three maximal points; slab sizes 12 (three points), 7 (five) and 4 (four).
SLAB_POINTS = PointSequence(
    [
        (4.0, 10.0), (8.0, 7.0), (12.0, 4.0),
        (1.0, 1.0), (2.0, 3.0), (3.0, 2.0),
        (5.0, 5.0), (6.0, 6.5), (7.0, 4.5),
        (9.0, 3.5), (10.0, 0.5), (11.0, 2.5),
    ]
)
SLAB_MEASURE = 5 * math.log2(12 / 7) + 4 * math.log2(3)


@dataclass
class PresetResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"name": self.name, "passed": self.passed, "details": self.details}


def three_partition():
    S = THREE_PARTITION_POINTS
    enclosures = [None] + [BoxD.bounding([S[i] for i in sub]) for sub in THREE_PARTITION_SUBSETS[1:]]
    return RespectfulPartition(THREE_PARTITION_SUBSETS, enclosures, "maxima2d")


def entropy_fixtures(full=False):
    part = three_partition()
    h = part.entropy
    h_vert = vertical_partition(THREE_PARTITION_POINTS, "maxima2d").entropy
    ok = (
        is_respectful(part, THREE_PARTITION_POINTS)
        and abs(h - THREE_PARTITION_ENTROPY) <= 1e-3
        and abs(h_vert - math.log2(3)) <= 1e-3
    )
    return PresetResult("entropy-fixtures", ok, {"h_partition": h, "h_vert": h_vert})


def slab_fixture(full=False):
    f = f_measure(SLAB_POINTS)
    return PresetResult("f-measure-fixture", abs(f - SLAB_MEASURE) <= 1e-3, {"f_measure_bits": f})


def _facets(result):
    return sorted(tuple(f) for f in result.facets)


def oracle_equivalence(full=False):
    count = 500 if full else 60
    rng = np.random.default_rng(0)
    mismatches = []
    for k in range(count):
        n = int(rng.integers(1, 65))
        S = generate(InstanceSpec("uniform-square", n, k))
        if maxima2d(S, rng=k).maximal != maxima_oracle(S, "bruteforce").maximal:
            mismatches.append(("maxima2d", n, k))
        if n >= 2 and hull2d(S, rng=k).vertices != hull2d_oracle(S, "bruteforce").vertices:
            mismatches.append(("hull2d", n, k))

        n3 = int(rng.integers(4, 49))
        B = generate(InstanceSpec("uniform-ball", n3, k))
        if _facets(hull3d(B, rng=k, delta=1.0, planes=0)) != _facets(hull3d_oracle(B, "incremental", rng=k)):
            mismatches.append(("hull3d", n3, k))

        family = "segint-random" if k % 2 == 0 else "rangerep-random"
        inst = encode_relation(generate(InstanceSpec(family, max(n, 2), k)))
        truth = relation_bruteforce(inst)
        if report_adaptive(inst, rng=k, delta=1.0).pairs != truth:
            mismatches.append(("report_adaptive", family, n, k))
        counts = count_adaptive(inst, "individual", rng=k, delta=1.0)
        red, blue = count_bruteforce(inst)
        if counts.total != len(truth) or counts.red_counts != red or counts.blue_counts != blue:
            mismatches.append(("count_adaptive", family, n, k))
    return PresetResult("oracle-equivalence", not mismatches, {"instances": count, "mismatches": mismatches[:20]})


def _bands_config(full):
    if full:
        return geometric_ladder(12, 17), 10
    return geometric_ladder(8, 11), 2


def hull3d_pruning(n, seed=0, delta=1.0, cap=1.0):
    """Pruned share of hull3d-easy once a round with HULL3D_PRUNE_CELLS cells has run."""
    S = generate(InstanceSpec("hull3d-easy", n, seed))
    res = hull3d(S, rng=seed, delta=delta, cap=cap, planes=0)
    return {
        "n": n,
        "rounds": [stat.r for stat in res.rounds],
        "pruned_fraction": res.pruned_fraction(HULL3D_PRUNE_CELLS),
    }


def adaptivity_bands(full=False):
    sizes, seeds = _bands_config(full)
    runs = [
        ("maxima-easy", "maxima2d", {"band_n": EASY_BAND}),
        ("hull2d-easy", "hull2d", {"band_n": EASY_BAND}),
        ("hull3d-easy", "hull3d", {"band_n": HULL3D_EASY_BAND}),
        ("segint-separated", "segint", {"band_n": EASY_BAND}),
        ("maxima-hard", "maxima2d", {"band_nlogn": HARD_BAND}),
        ("hull2d-hard", "hull2d", {"band_nlogn": HARD_BAND}),
    ]
    details, ok = {}, True
    for family, algorithm, thresholds in runs:
        rows = run_experiment(ExperimentConfig(family, sizes, seeds, [algorithm], diagnostics=False))
        fit = fit_scaling(rows, **thresholds)
        details[f"{family}/{algorithm}"] = fit.to_json()["fits"][0]
        ok = ok and fit.passed
    # default cap with delta 1/2 reaches 256 cells at 2^16 points
    pruning = hull3d_pruning(2**16, delta=0.5, cap=DEFAULT_CAP_EXPONENT) if full else hull3d_pruning(sizes[-1])
    details["hull3d-easy/pruning"] = pruning
    ok = ok and pruning["pruned_fraction"] is not None and pruning["pruned_fraction"] >= HULL3D_PRUNED_FRACTION
    return PresetResult("adaptivity-bands", ok, details)


def entropy_upper_bound(full=False):
    sizes, seeds = _bands_config(full)
    worst = {"maxima2d": 0.0, "hull2d": 0.0}
    for family in ("maxima-easy", "maxima-hard", "clustered", "uniform-square"):
        for n in sizes:
            for seed in range(seeds):
                S = generate(InstanceSpec(family, n, seed))
                meter = CostMeter()
                maxima2d(S, meter, rng=seed)
                h_kd = kd_respectful_partition(S, "maxima2d").entropy
                worst["maxima2d"] = max(worst["maxima2d"], meter.comparisons / (n * (h_kd + 1)))
    for family in ("hull2d-easy", "hull2d-hard"):
        for n in sizes:
            for seed in range(seeds):
                S = generate(InstanceSpec(family, n, seed))
                meter = CostMeter()
                hull2d(S, meter, rng=seed)
                h_known = entropy_of_sizes(S.meta["known_sizes"])
                worst["hull2d"] = max(worst["hull2d"], meter.cost / (n * (h_known + 1)))
    ok = worst["maxima2d"] <= MAXIMA_ENTROPY_CONSTANT and worst["hull2d"] <= HULL2D_ENTROPY_CONSTANT
    return PresetResult("entropy-upper-bound", ok, worst)


def adversary_force(full=False):
    exponents = range(8, 15) if full else range(8, 11)
    sessions, ok = [], True
    for k in exponents:
        n = 2**k
        S = generate(InstanceSpec("maxima-hard", n, k))
        for algorithm in ("maxima2d", "sortscan"):
            rep = adversary_session(S, algorithm, seed=k)
            good = (
                rep.T * DEFAULT_C_LB >= n * k
                and rep.replay_ok
                and rep.sound
                and rep.amortized_ok(DEFAULT_C_AMORT)
            )
            ok = ok and good
            sessions.append({"n": n, "algorithm": algorithm, "T": rep.T, "D": rep.D, "ok": good})
    return PresetResult("adversary-force", ok, {"sessions": sessions})


def measure_equivalence(full=False):
    sizes = geometric_ladder(6, 12 if full else 9)
    worst = {"f_over_kd": 0.0, "kd_over_f": 0.0, "kd_over_brute": 0.0}
    for family in ("maxima-easy", "maxima-hard", "clustered", "uniform-square"):
        for n in sizes:
            for seed in range(3):
                S = generate(InstanceSpec(family, n, seed))
                h_kd = kd_respectful_partition(S, "maxima2d").entropy
                f_per_n = f_measure(S) / n
                worst["f_over_kd"] = max(worst["f_over_kd"], f_per_n / (h_kd + 1))
                worst["kd_over_f"] = max(worst["kd_over_f"], h_kd / (f_per_n + 1))
    for seed in range(40 if full else 10):
        n = 2 + seed % (BRUTEFORCE_MAX_N - 1)
        S = generate(InstanceSpec("uniform-square", n, seed))
        h_kd = kd_respectful_partition(S, "maxima2d").entropy
        worst["kd_over_brute"] = max(worst["kd_over_brute"], h_kd / (structural_entropy_bruteforce(S) + 1))
    ok = (
        worst["f_over_kd"] <= MEASURE_CONSTANT
        and worst["kd_over_f"] <= MEASURE_CONSTANT
        and worst["kd_over_brute"] <= SANDWICH_CONSTANT
    )
    return PresetResult("measure-equivalence", ok, worst)


def average_linearity(full=False):
    sizes = geometric_ladder(12, 18) if full else geometric_ladder(8, 12)
    seeds = 50 if full else 10
    rows = run_experiment(ExperimentConfig("uniform-disk", sizes, seeds, ["hull2d"], diagnostics=False))
    fit = fit_scaling(rows, band_n=EASY_BAND)
    return PresetResult("average-linearity", fit.passed, fit.to_json()["fits"][0])


def random_order(full=False):
    instances = 10 if full else 3
    perms = 100 if full else 20
    worst = {"maxima2d": 0.0, "hull2d": 0.0}
    for k in range(instances):
        S = generate(InstanceSpec("uniform-square", 512, k))
        for name, run in (("maxima2d", maxima2d), ("hull2d", hull2d)):
            costs = []
            for p in range(perms):
                meter = CostMeter()
                run(permute(S, np.random.default_rng([k, p])), meter, np.random.default_rng([k, p, 1]))
                costs.append(meter.cost)
            worst[name] = max(worst[name], max(costs) / float(np.mean(costs)))
    ok = all(v <= RANDOM_ORDER_RATIO for v in worst.values())
    return PresetResult("random-order", ok, worst)


def _floats(values):
    return tuple(float(v) for v in values)


def _near_line(rng, dim):
    a = rng.uniform(-1.0, 1.0, dim)
    b = rng.uniform(-1.0, 1.0, dim)
    t = rng.uniform(-2.0, 2.0)
    c = a + t * (b - a)
    c = np.nextafter(c, c + rng.choice([-1.0, 1.0], dim))
    return [_floats(v) for v in (a, b, c)]


def predicate_exactness(full=False):
    count = 100_000 if full else 10_000
    rng = np.random.default_rng(0)
    mismatches = 0
    for k in range(count):
        degenerate = k % 2 == 1
        if degenerate:
            a, b, c = _near_line(rng, 2)
        else:
            a, b, c = (_floats(rng.uniform(-1.0, 1.0, 2)) for _ in range(3))
        mismatches += predicates.orient2d(a, b, c) != predicates.orient2d_exact(a, b, c)

        if degenerate:
            p, q, r = _near_line(rng, 3)
            s = np.array(p) + rng.uniform(-1.0, 1.0) * (np.array(q) - np.array(p))
            pts = (p, q, _floats(rng.uniform(-1.0, 1.0, 3)), _floats(np.nextafter(s, 2.0)))
        else:
            pts = tuple(_floats(rng.uniform(-1.0, 1.0, 3)) for _ in range(4))
        mismatches += predicates.orient3d(*pts) != predicates.orient3d_exact(*pts)
    return PresetResult("predicates-exact", mismatches == 0, {"cases": 2 * count, "mismatches": mismatches})


PRESETS = {
    "entropy-fixtures": entropy_fixtures,
    "f-measure-fixture": slab_fixture,
    "oracle-equivalence": oracle_equivalence,
    "adaptivity-bands": adaptivity_bands,
    "entropy-upper-bound": entropy_upper_bound,
    "adversary-force": adversary_force,
    "measure-equivalence": measure_equivalence,
    "average-linearity": average_linearity,
    "random-order": random_order,
    "predicates-exact": predicate_exactness,
}


def run_preset(name, full=False):
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")
    result = PRESETS[name](full=full)
    logger.info("preset %s: %s", name, "pass" if result.passed else "FAIL")
    return result
