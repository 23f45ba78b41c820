import argparse
import time

import numpy as np

from instance_geom.hull2d import hull2d, hull2d_oracle
from instance_geom.hull3d import hull3d, hull3d_oracle
from instance_geom.instances import InstanceSpec, generate
from instance_geom.maxima import maxima2d, maxima_oracle
from instance_geom.meter import CostMeter
from instance_geom.reporting import encode_relation, report_adaptive, segint_sweep_oracle

parser = argparse.ArgumentParser()
parser.add_argument("--n", type=int, default=4096)
parser.add_argument("--iterations", type=int, default=20)
parser.add_argument("--seed", type=int, default=0)
args = parser.parse_args()

n = args.n
instances = {}
instances["maxima_easy"] = generate(InstanceSpec("maxima-easy", n, args.seed))
instances["maxima_hard"] = generate(InstanceSpec("maxima-hard", n, args.seed))
instances["hull2d_easy"] = generate(InstanceSpec("hull2d-easy", n, args.seed))
instances["hull3d_easy"] = generate(InstanceSpec("hull3d-easy", n, args.seed))
instances["segint_separated"] = generate(InstanceSpec("segint-separated", n, args.seed))

runs = {}
runs["maxima2d_easy"] = lambda m, k: maxima2d(instances["maxima_easy"], m, k)
runs["sortscan_easy"] = lambda m, k: maxima_oracle(instances["maxima_easy"], "sortscan", m)
runs["maxima2d_hard"] = lambda m, k: maxima2d(instances["maxima_hard"], m, k)
runs["hull2d_easy"] = lambda m, k: hull2d(instances["hull2d_easy"], m, k)
runs["monotone_chain_easy"] = lambda m, k: hull2d_oracle(instances["hull2d_easy"], "monotone-chain", m)
runs["hull3d_easy"] = lambda m, k: hull3d(instances["hull3d_easy"], m, k, planes=0)
runs["incremental_easy"] = lambda m, k: hull3d_oracle(instances["hull3d_easy"], "incremental", m, k)
runs["segint_separated"] = lambda m, k: report_adaptive(encode_relation(instances["segint_separated"]), m, k)
runs["segint_sweep_separated"] = lambda m, k: segint_sweep_oracle(instances["segint_separated"], m)

times = {name: [] for name in runs}
costs = {name: [] for name in runs}

for i in range(args.iterations):
    for name, run in runs.items():
        meter = CostMeter()
        s = time.time()
        run(meter, args.seed + i)
        took = time.time() - s
        times[name].append(took)
        costs[name].append(meter.cost)

report = {}
for name in runs:
    report[f"{name}_mean"] = np.mean(times[name])
    report[f"{name}_std"] = np.std(times[name])
    report[f"{name}_cost"] = np.mean(costs[name]) / n

print(f"Report (n={n}, {args.iterations} iterations):")
for key_suffix in runs:
    mean_key = f"{key_suffix}_mean"
    std_key = f"{key_suffix}_std"
    mean_val = report[mean_key]
    std_val = report[std_key]
    print(
        f"{mean_key}: {mean_val:.6f} s ({1.0 / mean_val:.2f} Hz), {std_key}: {std_val:.6f} s, "
        f"cost/n: {report[f'{key_suffix}_cost']:.2f}"
    )
