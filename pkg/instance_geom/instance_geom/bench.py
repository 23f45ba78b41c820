"""
Scaling experiments: run algorithms over a size ladder of generated
instances and random input orders, write one CSV row per run, and fit
cost bands from the rows.
"""
import csv
import io
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from instance_geom.config import DEFAULT_CAP_EXPONENT, DEFAULT_DELTA
from instance_geom.entropy import f_measure, kd_respectful_partition, vertical_partition
from instance_geom.errors import ConfigError, FitError
from instance_geom.hull2d import hull2d, hull2d_oracle
from instance_geom.hull3d import hull3d, hull3d_oracle
from instance_geom.instances import (
    FAMILIES,
    RANGE_FAMILIES,
    SEGMENT_FAMILIES,
    InstanceSpec,
    RangeInstance,
    SegmentSet,
    generate,
)
from instance_geom.maxima import maxima2d, maxima_oracle
from instance_geom.meter import CostMeter
from instance_geom.reporting import (
    count_adaptive,
    encode_relation,
    rangerep_sweep_oracle,
    report_adaptive,
    safety_partition,
    segint_sweep_oracle,
)

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "family", "n", "seed", "perm", "algorithm",
    "comparisons", "orient2d", "orient3d", "dominance",
    "output_size", "h_kd", "h_vert", "f_per_n", "wall_ns",
)


def _maxima(seq, meter, rng, cfg):
    return len(maxima2d(seq, meter, rng).maximal)


def _maxima_left(seq, meter, rng, cfg):
    return len(maxima2d(seq, meter, rng, prune="left").maximal)


def _sortscan(seq, meter, rng, cfg):
    return len(maxima_oracle(seq, "sortscan", meter).maximal)


def _hull2d(seq, meter, rng, cfg):
    return len(hull2d(seq, meter, rng).vertices)


def _monotone(seq, meter, rng, cfg):
    return len(hull2d_oracle(seq, "monotone-chain", meter).vertices)


def _hull3d(seq, meter, rng, cfg):
    return len(hull3d(seq, meter, rng, cfg.delta, cfg.cap, planes=0).facets)


def _hull3d_hier(seq, meter, rng, cfg):
    return len(hull3d(seq, meter, rng, cfg.delta, cfg.cap, hierarchical=True, planes=0).facets)


def _incremental(seq, meter, rng, cfg):
    return len(hull3d_oracle(seq, "incremental", meter, rng).facets)


def _report(raw, meter, rng, cfg):
    return report_adaptive(encode_relation(raw), meter, rng, cfg.delta, cfg.cap).K


def _count(raw, meter, rng, cfg):
    return count_adaptive(encode_relation(raw), "total", meter, rng, cfg.delta, cfg.cap).total


def _segint_sweep(raw, meter, rng, cfg):
    return segint_sweep_oracle(raw, meter).K


def _rangerep_sweep(raw, meter, rng, cfg):
    return rangerep_sweep_oracle(raw, meter).K


# name -> (input kind, runner returning the output size)
ALGORITHMS = {
    "maxima2d": ("points2", _maxima),
    "maxima2d-left": ("points2", _maxima_left),
    "sortscan": ("points2", _sortscan),
    "hull2d": ("points2", _hull2d),
    "monotone-chain": ("points2", _monotone),
    "hull3d": ("points3", _hull3d),
    "hull3d-hierarchical": ("points3", _hull3d_hier),
    "incremental": ("points3", _incremental),
    "segint": ("segint", _report),
    "segint-count": ("segint", _count),
    "segint-sweep": ("segint", _segint_sweep),
    "rangerep": ("rangerep", _report),
    "rangerep-count": ("rangerep", _count),
    "rangerep-sweep": ("rangerep", _rangerep_sweep),
}


def family_kind(family, params=None):
    if family in SEGMENT_FAMILIES:
        return "segint"
    if family in RANGE_FAMILIES:
        return "rangerep"
    if family in ("hull3d-easy", "hull3d-hard", "uniform-ball"):
        return "points3"
    if family == "clustered" and (params or {}).get("dim", 2) == 3:
        return "points3"
    return "points2"


@dataclass
class ExperimentConfig:
    family: str
    sizes: list
    seeds: int = 1
    algorithms: list = field(default_factory=lambda: ["maxima2d"])
    perms: int = 1
    output: str = None
    params: dict = field(default_factory=dict)
    delta: float = DEFAULT_DELTA
    cap: float = DEFAULT_CAP_EXPONENT
    base_seed: int = 0
    workers: int = 1
    record_wall: bool = False
    diagnostics: bool = True

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}")
        self.sizes = [int(n) for n in self.sizes]
        if not self.sizes or any(n < 1 for n in self.sizes):
            raise ConfigError("size ladder must be non-empty and positive")
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise ConfigError(f"size ladder must be strictly increasing, got {self.sizes}")
        if self.seeds < 1:
            raise ConfigError(f"seeds must be at least 1, got {self.seeds}")
        if self.perms < 1:
            raise ConfigError(f"perms must be at least 1, got {self.perms}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")
        kind = family_kind(self.family, self.params)
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {name!r}; expected one of {', '.join(ALGORITHMS)}")
            if ALGORITHMS[name][0] != kind:
                raise ConfigError(f"algorithm {name!r} does not run on {self.family!r} instances")


def geometric_ladder(lo_exp, hi_exp, base=2):
    return [base**k for k in range(lo_exp, hi_exp + 1)]


def permute(instance, rng):
    """The same instance in a random input order."""
    if isinstance(instance, SegmentSet):
        h = rng.permutation(len(instance.horizontals))
        v = rng.permutation(len(instance.verticals))
        return SegmentSet([instance.horizontals[i] for i in h], [instance.verticals[i] for i in v], instance.meta)
    if isinstance(instance, RangeInstance):
        p = rng.permutation(len(instance.points))
        r = rng.permutation(len(instance.rects))
        return RangeInstance([instance.points[i] for i in p], [instance.rects[i] for i in r], instance.meta)
    return instance.permuted(rng.permutation(len(instance)).tolist())


def diagnostics(instance, kind, algorithm):
    """(h_kd, h_vert, F(S)/n) for the instance; None where undefined."""
    if kind == "points2":
        n = len(instance)
        if algorithm in ("hull2d", "monotone-chain"):
            if n < 2:
                return None, None, None
            h_kd = kd_respectful_partition(instance, "upperhull2d-boxes").entropy
            return h_kd, vertical_partition(instance, "upperhull2d").entropy, None
        h_kd = kd_respectful_partition(instance, "maxima2d").entropy
        h_vert = vertical_partition(instance, "maxima2d").entropy
        return h_kd, h_vert, f_measure(instance) / n if n else 0.0
    if kind in ("segint", "rangerep"):
        return safety_partition(encode_relation(instance), "red").entropy, None, None
    return None, None, None


def _fmt(v):
    return "" if v is None else f"{v:.6f}"


def _run_instance(config, n, seed):
    spec = InstanceSpec(config.family, n, config.base_seed + seed, dict(config.params))
    instance = generate(spec)
    kind = family_kind(config.family, config.params)
    diag = {}
    if config.diagnostics:
        for name in config.algorithms:
            diag[name] = diagnostics(instance, kind, name)
    rows = []
    for perm in range(config.perms):
        order_rng = np.random.default_rng([spec.seed, n, perm])
        shuffled = permute(instance, order_rng) if perm else instance
        for name in config.algorithms:
            meter = CostMeter()
            out = ALGORITHMS[name][1](shuffled, meter, np.random.default_rng([spec.seed, perm, 1]), config)
            h_kd, h_vert, f_per_n = diag.get(name, (None, None, None))
            rows.append(
                {
                    "family": config.family,
                    "n": n,
                    "seed": spec.seed,
                    "perm": perm,
                    "algorithm": name,
                    "comparisons": meter.comparisons,
                    "orient2d": meter.orient2d_calls,
                    "orient3d": meter.orient3d_calls,
                    "dominance": meter.dominance_tests,
                    "output_size": out,
                    "h_kd": _fmt(h_kd),
                    "h_vert": _fmt(h_vert),
                    "f_per_n": _fmt(f_per_n),
                    "wall_ns": meter.wall_ns if config.record_wall else 0,
                }
            )
    logger.info("bench %s n=%d seed=%d: %d runs", config.family, n, spec.seed, len(rows))
    return rows


def _sort_key(config):
    order = {name: k for k, name in enumerate(config.algorithms)}
    return lambda row: (row["n"], row["seed"], row["perm"], order[row["algorithm"]])


def rows_to_csv(rows):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def run_experiment(config):
    """
    Every (size, seed, permutation, algorithm) run of the config, in
    canonical order. Writes the CSV to `config.output` when set.
    """
    jobs = [(n, seed) for n in config.sizes for seed in range(config.seeds)]
    rows = []
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_run_instance, config, n, seed) for n, seed in jobs]
            for fut in futures:
                rows.extend(fut.result())
    else:
        for n, seed in jobs:
            rows.extend(_run_instance(config, n, seed))
    rows.sort(key=_sort_key(config))
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="") as f:
            f.write(rows_to_csv(rows))
    return rows


def read_rows(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def row_cost(row):
    return int(row["comparisons"]) + int(row["orient2d"]) + int(row["orient3d"])


@dataclass
class AlgorithmFit:
    family: str
    algorithm: str
    sizes: list
    cost_per_n: list
    cost_per_nlogn: list
    entropy_constant: float = None

    @property
    def band_n(self):
        return max(self.cost_per_n) / min(self.cost_per_n)

    @property
    def band_nlogn(self):
        return max(self.cost_per_nlogn) / min(self.cost_per_nlogn)

    def to_json(self):
        return {
            "family": self.family,
            "algorithm": self.algorithm,
            "sizes": list(self.sizes),
            "cost_per_n": list(self.cost_per_n),
            "cost_per_nlogn": list(self.cost_per_nlogn),
            "band_n": self.band_n,
            "band_nlogn": self.band_nlogn,
            "entropy_constant": self.entropy_constant,
        }


@dataclass
class ScalingFit:
    fits: list
    thresholds: dict = field(default_factory=dict)

    def verdicts(self):
        """Per (family, algorithm): True when every configured threshold holds."""
        out = {}
        for fit in self.fits:
            ok = True
            if "band_n" in self.thresholds:
                ok = ok and fit.band_n <= self.thresholds["band_n"]
            if "band_nlogn" in self.thresholds:
                ok = ok and fit.band_nlogn <= self.thresholds["band_nlogn"]
            if "entropy_constant" in self.thresholds and fit.entropy_constant is not None:
                ok = ok and fit.entropy_constant <= self.thresholds["entropy_constant"]
            out[(fit.family, fit.algorithm)] = ok
        return out

    @property
    def passed(self):
        return all(self.verdicts().values())

    def __getitem__(self, algorithm):
        for fit in self.fits:
            if fit.algorithm == algorithm:
                return fit
        raise KeyError(algorithm)

    def to_json(self):
        verdicts = self.verdicts()
        return {
            "thresholds": dict(self.thresholds),
            "fits": [dict(fit.to_json(), passed=verdicts[(fit.family, fit.algorithm)]) for fit in self.fits],
            "passed": self.passed,
        }


def fit_scaling(source, **thresholds):
    """
    Ratio tables and bands from run_experiment rows (a list of dicts or a
    CSV path). Mean cost per size is divided by n and by n*log2(n); the
    entropy constant is the largest cost / (n * (h_kd + 1)) of any row.
    """
    rows = read_rows(source) if isinstance(source, (str, os.PathLike)) else list(source)
    groups = {}
    for row in rows:
        groups.setdefault((row["family"], row["algorithm"]), []).append(row)

    fits = []
    for (family, algorithm), group in sorted(groups.items()):
        by_n = {}
        for row in group:
            by_n.setdefault(int(row["n"]), []).append(row_cost(row))
        sizes = sorted(by_n)
        if len(sizes) < 3:
            raise FitError(f"{family}/{algorithm}: need at least 3 ladder sizes, got {len(sizes)}")
        means = [float(np.mean(by_n[n])) for n in sizes]
        per_n = [m / n for m, n in zip(means, sizes)]
        per_nlogn = [m / (n * max(math.log2(n), 1.0)) for m, n in zip(means, sizes)]
        constants = [
            row_cost(row) / (int(row["n"]) * (float(row["h_kd"]) + 1.0))
            for row in group
            if row.get("h_kd") not in (None, "")
        ]
        fits.append(
            AlgorithmFit(family, algorithm, sizes, per_n, per_nlogn, max(constants) if constants else None)
        )
        logger.debug("fit %s/%s: band_n=%.3f band_nlogn=%.3f", family, algorithm, fits[-1].band_n, fits[-1].band_nlogn)
    return ScalingFit(fits, thresholds)
