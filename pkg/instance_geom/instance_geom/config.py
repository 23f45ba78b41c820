import math
import os

import numpy as np

from instance_geom.errors import ConfigError

DEFAULT_SEED = 0
DEFAULT_DELTA = 0.25
DEFAULT_CAP_EXPONENT = 0.5
DEFAULT_GROUP_SIZE = 64
DEFAULT_C_AMORT = 8
DEFAULT_C_LB = 16
BRUTEFORCE_MAX_N = 12
# exhaustive collinear/coplanar check up to this many points
HULL_CHECK_MAX_N = 24
HULL_CHECK_SAMPLES = 2000

# acceptance bands
EASY_BAND = 2.0
HULL3D_EASY_BAND = 2.5
HARD_BAND = 3.0
MAXIMA_ENTROPY_CONSTANT = 12
HULL2D_ENTROPY_CONSTANT = 16
MEASURE_CONSTANT = 8
SANDWICH_CONSTANT = 4
RANDOM_ORDER_RATIO = 3.0
HULL3D_PRUNE_CELLS = 256
HULL3D_PRUNED_FRACTION = 0.9

SEED_ENV = "GEOM_SEED"


def default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        seed = int(raw, 0)
    except ValueError:
        raise ConfigError(f"{SEED_ENV}={raw!r} is not an integer")
    if seed < 0:
        raise ConfigError(f"{SEED_ENV} must be non-negative, got {seed}")
    return seed


def make_rng(seed=None):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(default_seed() if seed is None else seed)


def round_schedule(n, delta=DEFAULT_DELTA, cap=DEFAULT_CAP_EXPONENT):
    """Cell counts r_j = 2^(2^j) for j = 0..floor(log2(delta * log2 n)), capped at n^cap."""
    if n < 2 or delta <= 0:
        return []
    budget = delta * math.log2(n)
    if budget < 1:
        return []
    limit = 2 ** max(0, math.floor(cap * math.log2(n)))
    return [min(2 ** (2**j), limit) for j in range(math.floor(math.log2(budget)) + 1)]
