import argparse
import json
import logging
import sys

from instance_geom.adversary import ALGORITHMS as ADVERSARY_ALGORITHMS
from instance_geom.adversary import adversary_session
from instance_geom.bench import ALGORITHMS as BENCH_ALGORITHMS
from instance_geom.bench import ExperimentConfig, fit_scaling, rows_to_csv, run_experiment
from instance_geom.config import DEFAULT_CAP_EXPONENT, DEFAULT_DELTA, default_seed
from instance_geom.entropy import entropy_report
from instance_geom.errors import ConfigError, GeometryError
from instance_geom.hull2d import convex_hull2d, hull2d, hull2d_oracle, lower_hull2d
from instance_geom.hull3d import hull3d, hull3d_oracle
from instance_geom.instances import FAMILIES, InstanceSpec, RangeInstance, SegmentSet, generate, load
from instance_geom.maxima import maxima2d, maxima_oracle
from instance_geom.meter import CostMeter
from instance_geom.points import PointSequence
from instance_geom.presets import PRESETS, run_preset
from instance_geom.reporting import (
    count_adaptive,
    encode_relation,
    rangerep_sweep_oracle,
    report_adaptive,
    safety_partition,
    segint_sweep_oracle,
)

logger = logging.getLogger("instance_geom")

DEFAULT_FAMILY = {
    "maxima": "maxima-easy",
    "hull2d": "hull2d-easy",
    "hull3d": "hull3d-easy",
    "segint": "segint-separated",
    "rangerep": "rangerep-random",
    "entropy": "maxima-easy",
    "adversary": "maxima-hard",
}


def _instance(args):
    if args.input:
        return load(args.input)
    family = args.family or DEFAULT_FAMILY[args.command]
    return generate(InstanceSpec(family, args.n, args.seed))


def _points(args, dim):
    inst = _instance(args)
    if not isinstance(inst, PointSequence):
        raise ConfigError(f"{args.command} needs a point instance, got {type(inst).__name__}")
    return inst.require(dim=dim)


def cmd_maxima(args):
    S = _points(args, 2)
    meter = CostMeter()
    if args.algorithm in ("maxima2d", "maxima2d-left"):
        prune = "left" if args.algorithm == "maxima2d-left" else "both"
        result = maxima2d(S, meter, args.seed, prune=prune)
    else:
        result = maxima_oracle(S, args.algorithm, meter)
    return dict(result.to_json(), n=len(S), h=len(result.maximal))


def cmd_hull2d(args):
    S = _points(args, 2)
    meter = CostMeter()
    if args.algorithm == "hull2d":
        result = hull2d(S, meter, args.seed)
    elif args.algorithm == "lower":
        result = lower_hull2d(S, meter, args.seed)
    elif args.algorithm == "convex":
        result = convex_hull2d(S, meter, args.seed)
    else:
        result = hull2d_oracle(S, args.algorithm, meter)
    return dict(result.to_json(), n=len(S), h=len(result.vertices))


def cmd_hull3d(args):
    S = _points(args, 3)
    meter = CostMeter()
    if args.algorithm in ("hull3d", "hierarchical"):
        result = hull3d(
            S, meter, args.seed, args.delta, args.cap, hierarchical=args.algorithm == "hierarchical"
        )
    else:
        result = hull3d_oracle(S, args.algorithm, meter, args.seed)
    return dict(result.to_json(), n=len(S), h=len(result.facets))


def _relation(args, kind):
    raw = _instance(args)
    if not isinstance(raw, kind):
        raise ConfigError(f"{args.command} needs a {kind.__name__} instance, got {type(raw).__name__}")
    inst = encode_relation(raw)
    meter = CostMeter()
    if args.mode == "sweep":
        sweep = segint_sweep_oracle if kind is SegmentSet else rangerep_sweep_oracle
        out = sweep(raw, meter).to_json()
    elif args.mode == "report":
        out = report_adaptive(inst, meter, args.seed, args.delta, args.cap).to_json()
    else:
        out = count_adaptive(inst, args.mode, meter, args.seed, args.delta, args.cap).to_json()
    out["n"] = len(inst)
    out["entropy"] = {c: safety_partition(inst, c, args.seed).entropy for c in ("red", "blue")}
    return out


def cmd_segint(args):
    return _relation(args, SegmentSet)


def cmd_rangerep(args):
    return _relation(args, RangeInstance)


def cmd_entropy(args):
    S = _points(args, 2)
    return entropy_report(S, args.problem).to_json()


def cmd_adversary(args):
    S = _points(args, 2)
    rep = adversary_session(S, args.algorithm, args.seed, state_checks=args.check)
    out = rep.to_json()
    out["n"] = rep.n
    out["force_ratio"] = rep.force_ratio
    if not args.sigma:
        del out["sigma"]
    return out


def cmd_bench(args):
    if args.preset:
        results = [run_preset(name, full=args.full) for name in args.preset]
        for r in results:
            print(f"{r.name}: {'pass' if r.passed else 'FAIL'}", file=sys.stderr)
        out = {"presets": [r.to_json() for r in results]}
        return out, 0 if all(r.passed for r in results) else 1

    config = ExperimentConfig(
        family=args.family or "maxima-easy",
        sizes=args.n_list or [args.n],
        seeds=args.seeds,
        algorithms=args.algorithms or ["maxima2d"],
        perms=args.perms,
        output=args.csv,
        delta=args.delta,
        cap=args.cap,
        base_seed=args.seed,
        workers=args.workers,
        record_wall=args.wall,
    )
    rows = run_experiment(config)
    if not args.csv:
        sys.stdout.write(rows_to_csv(rows))
        return None, 0
    return {"rows": len(rows), "csv": args.csv}, 0


def cmd_fit(args):
    thresholds = {}
    if args.band_n is not None:
        thresholds["band_n"] = args.band_n
    if args.band_nlogn is not None:
        thresholds["band_nlogn"] = args.band_nlogn
    if args.entropy_constant is not None:
        thresholds["entropy_constant"] = args.entropy_constant
    fit = fit_scaling(args.csv, **thresholds)
    return fit.to_json(), 0 if fit.passed else 1


COMMANDS = {
    "maxima": cmd_maxima,
    "hull2d": cmd_hull2d,
    "hull3d": cmd_hull3d,
    "segint": cmd_segint,
    "rangerep": cmd_rangerep,
    "entropy": cmd_entropy,
    "adversary": cmd_adversary,
    "bench": cmd_bench,
    "fit": cmd_fit,
}


def _common(p, n_default=1024, with_input=True):
    if with_input:
        p.add_argument("--input", type=str, default=None, help="instance file instead of a generated family")
    p.add_argument("--family", type=str, default=None, choices=FAMILIES)
    p.add_argument("--n", type=int, default=n_default)
    p.add_argument("--seed", type=int, default=None, help="defaults to $GEOM_SEED or 0")
    p.add_argument("--json", type=str, default=None, help="write the JSON result to this path")


def _tunables(p):
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--cap", type=float, default=DEFAULT_CAP_EXPONENT)


def build_parser():
    parser = argparse.ArgumentParser(prog="instance-geom")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("maxima")
    _common(p)
    p.add_argument("-a", "--algorithm", default="maxima2d", choices=["maxima2d", "maxima2d-left", "sortscan", "bruteforce"])

    p = sub.add_parser("hull2d")
    _common(p)
    p.add_argument(
        "-a", "--algorithm", default="hull2d", choices=["hull2d", "lower", "convex", "monotone-chain", "bruteforce"]
    )

    p = sub.add_parser("hull3d")
    _common(p)
    _tunables(p)
    p.add_argument("-a", "--algorithm", default="hull3d", choices=["hull3d", "hierarchical", "incremental", "bruteforce"])

    for name in ("segint", "rangerep"):
        p = sub.add_parser(name)
        _common(p)
        _tunables(p)
        p.add_argument("-m", "--mode", default="report", choices=["report", "total", "individual", "sweep"])

    p = sub.add_parser("entropy")
    _common(p, n_default=256)
    p.add_argument("--problem", default="maxima2d", choices=["maxima2d", "upperhull2d"])

    p = sub.add_parser("adversary")
    _common(p, n_default=256)
    p.add_argument("-a", "--algorithm", default="maxima2d", choices=list(ADVERSARY_ALGORITHMS))
    p.add_argument("--check", action="store_true", help="verify the adversary state after the session")
    p.add_argument("--sigma", action="store_true", help="include the final permutation")

    p = sub.add_parser("bench")
    _common(p, with_input=False)
    _tunables(p)
    p.add_argument("--sizes", dest="n_list", type=int, nargs="+", default=None)
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--perms", type=int, default=1)
    p.add_argument("--algorithms", nargs="+", default=None, choices=list(BENCH_ALGORITHMS))
    p.add_argument("--csv", type=str, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--wall", action="store_true", help="record wall time (breaks byte-identical reruns)")
    p.add_argument("--preset", nargs="+", default=None, choices=list(PRESETS))
    p.add_argument("--full", action="store_true", help="run presets on the complete ladders")

    p = sub.add_parser("fit")
    p.add_argument("--csv", type=str, required=True)
    p.add_argument("--band-n", type=float, default=None)
    p.add_argument("--band-nlogn", type=float, default=None)
    p.add_argument("--entropy-constant", type=float, default=None)
    p.add_argument("--json", type=str, default=None)
    return parser


def _emit(out, path):
    text = json.dumps(out, indent=2, default=float)
    if path and path != "-":
        with open(path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        if hasattr(args, "seed") and args.seed is None:
            args.seed = default_seed()
        logger.debug("command %s: %s", args.command, vars(args))
        result = COMMANDS[args.command](args)
    except GeometryError as e:
        print(f"instance-geom: {e}", file=sys.stderr)
        return 2
    out, status = result if isinstance(result, tuple) else (result, 0)
    if out is not None:
        _emit(out, getattr(args, "json", None))
    return status


if __name__ == "__main__":
    sys.exit(main())
