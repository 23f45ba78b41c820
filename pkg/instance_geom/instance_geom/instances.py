"""
Instance families, nondegeneracy certification and text I/O.

Point files hold one point per line; segment files hold `H x x' y` and
`V xi eta eta'` lines; range files mix point lines with
`R xlo xhi ylo yhi` lines. Lines starting with `#` are comments.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull

from instance_geom.config import HULL_CHECK_MAX_N, HULL_CHECK_SAMPLES
from instance_geom.errors import (
    ConfigError,
    DegenerateInputError,
    GeometryError,
    InstanceFormatError,
)
from instance_geom.points import PointSequence, distinct_axes_violation, hull_position_violation
from instance_geom.predicates import orient2d, orient3d

logger = logging.getLogger(__name__)

POINT_FAMILIES = (
    "maxima-easy",
    "maxima-hard",
    "hull2d-easy",
    "hull2d-hard",
    "hull3d-easy",
    "hull3d-hard",
    "clustered",
    "uniform-disk",
    "uniform-square",
    "uniform-ball",
)
SEGMENT_FAMILIES = ("segint-crossing-grid", "segint-separated", "segint-random")
RANGE_FAMILIES = ("rangerep-random",)
FAMILIES = POINT_FAMILIES + SEGMENT_FAMILIES + RANGE_FAMILIES

HULL_FAMILIES = ("hull2d-easy", "hull2d-hard", "hull3d-easy", "hull3d-hard", "uniform-disk", "uniform-ball")
MAX_RETRIES = 8


@dataclass
class InstanceSpec:
    family: str
    n: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if self.n < 1:
            raise ConfigError(f"n must be at least 1, got {self.n}")
        if self.family == "clustered":
            k = self.params.get("k", 4)
            if not 1 <= k <= self.n:
                raise ConfigError(f"clustered needs 1 <= k <= n, got k={k}")
            if self.params.get("dim", 2) not in (2, 3):
                raise ConfigError("clustered dim must be 2 or 3")
        if self.family == "segint-crossing-grid":
            h, v = self.grid_shape()
            if h < 0 or v < 0 or h + v < 1:
                raise ConfigError(f"bad crossing grid shape h={h} v={v}")

    def grid_shape(self):
        h = int(self.params.get("h", self.n // 2))
        v = int(self.params.get("v", self.n - h))
        return h, v

    @property
    def meta(self):
        return {"family": self.family, "n": self.n, "seed": self.seed, **self.params}


class SegmentSet:
    """Horizontal segments (x, x', y) with x < x' and vertical segments (xi, eta, eta') with eta < eta'."""

    def __init__(self, horizontals, verticals, meta=None):
        self.horizontals = [tuple(float(c) for c in h) for h in horizontals]
        self.verticals = [tuple(float(c) for c in v) for v in verticals]
        self.meta = dict(meta or {})
        for x, x2, _ in self.horizontals:
            if not x < x2:
                raise GeometryError(f"horizontal segment with x={x} >= x'={x2}")
        for _, e, e2 in self.verticals:
            if not e < e2:
                raise GeometryError(f"vertical segment with eta={e} >= eta'={e2}")

    def __len__(self):
        return len(self.horizontals) + len(self.verticals)

    def __eq__(self, other):
        return (
            isinstance(other, SegmentSet)
            and self.horizontals == other.horizontals
            and self.verticals == other.verticals
        )

    def __repr__(self):
        return f"SegmentSet(h={len(self.horizontals)}, v={len(self.verticals)})"

    def validate(self):
        xs = [c for h in self.horizontals for c in h[:2]] + [v[0] for v in self.verticals]
        ys = [h[2] for h in self.horizontals] + [c for v in self.verticals for c in v[1:]]
        _require_distinct(xs, "x")
        _require_distinct(ys, "y")
        return self


class RangeInstance:
    """Points (x, y) and axis-parallel rectangles (xlo, xhi, ylo, yhi)."""

    def __init__(self, points, rects, meta=None):
        self.points = [tuple(float(c) for c in p) for p in points]
        self.rects = [tuple(float(c) for c in r) for r in rects]
        self.meta = dict(meta or {})
        for r in self.rects:
            if not (r[0] < r[1] and r[2] < r[3]):
                raise GeometryError(f"rectangle {r} has an empty side")

    def __len__(self):
        return len(self.points) + len(self.rects)

    def __eq__(self, other):
        return isinstance(other, RangeInstance) and self.points == other.points and self.rects == other.rects

    def __repr__(self):
        return f"RangeInstance(points={len(self.points)}, rects={len(self.rects)})"

    def validate(self):
        xs = [p[0] for p in self.points] + [c for r in self.rects for c in r[:2]]
        ys = [p[1] for p in self.points] + [c for r in self.rects for c in r[2:]]
        _require_distinct(xs, "x")
        _require_distinct(ys, "y")
        return self


def _require_distinct(values, axis):
    seen = {}
    for k, v in enumerate(values):
        if v in seen:
            raise DegenerateInputError(f"coordinate {v!r} repeats on axis {axis}", indices=(seen[v], k))
        seen[v] = k


def _distinct(rng, size, lo, hi):
    """`size` distinct uniform draws from [lo, hi)."""
    out = np.unique(rng.uniform(lo, hi, size))
    while len(out) < size:
        out = np.unique(np.concatenate([out, rng.uniform(lo, hi, size - len(out))]))
    return rng.permutation(out)


def _maxima_easy(rng, n):
    corners = np.array([[0.05, 0.95], [0.5, 0.5], [0.95, 0.05]])
    rest = rng.uniform(0.1, 0.45, (max(n - 3, 0), 2))
    pts = np.vstack([corners[: min(n, 3)], rest])
    return pts, [1] * min(n, 3) + ([n - 3] if n > 3 else [])


def _maxima_hard(rng, n):
    xs = np.sort(_distinct(rng, n, 0.0, 1.0))
    ys = np.sort(_distinct(rng, n, 0.0, 1.0))[::-1]
    return rng.permutation(np.column_stack([xs, ys])), [1] * n


def _inner_simplex(rng, vertices, count, shrink):
    centroid = vertices.mean(axis=0)
    weights = rng.dirichlet(np.ones(len(vertices)), count)
    return centroid + shrink * (weights @ (vertices - centroid))


def _hull2d_easy(rng, n):
    tri = np.array([[0.0, 0.0], [0.5, 1.0], [1.0, 0.1]])
    inner = _inner_simplex(rng, tri, max(n - 3, 0), 0.5)
    return np.vstack([tri[: min(n, 3)], inner]), [1] * min(n, 3) + ([n - 3] if n > 3 else [])


def _hull2d_hard(rng, n):
    xs = _distinct(rng, n, -1.0, 1.0)
    return np.column_stack([xs, -xs * xs]), [1] * n


def _hull3d_easy(rng, n):
    tet = np.array(
        [[0.02, 0.03, 0.01], [0.97, 0.11, 0.05], [0.41, 0.96, 0.07], [0.52, 0.38, 0.93]]
    )
    inner = _inner_simplex(rng, tet, max(n - 4, 0), 0.2)
    return np.vstack([tet[: min(n, 4)], inner]), [1] * min(n, 4) + ([n - 4] if n > 4 else [])


def _hull3d_hard(rng, n):
    r = np.sqrt(rng.uniform(0.0, 1.0, n))
    t = rng.uniform(0.0, 2 * math.pi, n)
    x, y = r * np.cos(t), r * np.sin(t)
    return np.column_stack([x, y, -(x * x + y * y)]), [1] * n


def _clustered(rng, n, k=4, dim=2, sigma=0.02):
    centers = rng.uniform(0.0, 1.0, (k, dim))
    labels = rng.integers(k, size=n)
    return centers[labels] + rng.normal(0.0, sigma, (n, dim)), None


def _uniform_disk(rng, n):
    r = np.sqrt(rng.uniform(0.0, 1.0, n))
    t = rng.uniform(0.0, 2 * math.pi, n)
    return np.column_stack([r * np.cos(t), r * np.sin(t)]), None


def _uniform_square(rng, n):
    return rng.uniform(0.0, 1.0, (n, 2)), None


def _uniform_ball(rng, n):
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * rng.uniform(0.0, 1.0, (n, 1)) ** (1.0 / 3.0), None


POINT_GENERATORS = {
    "maxima-easy": _maxima_easy,
    "maxima-hard": _maxima_hard,
    "hull2d-easy": _hull2d_easy,
    "hull2d-hard": _hull2d_hard,
    "hull3d-easy": _hull3d_easy,
    "hull3d-hard": _hull3d_hard,
    "uniform-disk": _uniform_disk,
    "uniform-square": _uniform_square,
    "uniform-ball": _uniform_ball,
}


def _sampled_hull_violation(points, rng, samples):
    """Seeded spot check of random triples (2-d) or quadruples (3-d)."""
    k = len(points[0]) + 1
    test = orient2d if k == 3 else orient3d
    for picks in rng.integers(len(points), size=(samples, k)).tolist():
        if len(set(picks)) == k and test(*(points[i] for i in picks)) == 0:
            return tuple(picks)
    return None


def _certify_points(spec, pts):
    """
    Distinct coordinates are checked exhaustively. For hull families the
    collinear/coplanar check is exhaustive up to HULL_CHECK_MAX_N points;
    larger instances get it on their extreme points (when few) plus a
    seeded sample of HULL_CHECK_SAMPLES tuples, and the hull algorithms
    reject any degeneracy their own predicates run into.
    """
    points = [tuple(p) for p in pts.tolist()]
    if distinct_axes_violation(points) is not None:
        return False
    if spec.family in HULL_FAMILIES:
        if len(points) <= HULL_CHECK_MAX_N:
            if hull_position_violation(points) is not None:
                return False
        else:
            extreme = ConvexHull(pts).vertices
            if len(extreme) <= HULL_CHECK_MAX_N:
                if hull_position_violation([points[i] for i in extreme]) is not None:
                    return False
            rng = np.random.default_rng(spec.seed)
            if _sampled_hull_violation(points, rng, HULL_CHECK_SAMPLES) is not None:
                return False
    if spec.family in ("hull2d-hard", "hull3d-hard") and len(points) > pts.shape[1]:
        if len(ConvexHull(pts).vertices) != len(points):
            return False
    return True


def _crossing_grid(rng, spec):
    h, v = spec.grid_shape()
    ys = _distinct(rng, h, 0.0, 1.0)
    xis = _distinct(rng, v, 0.0, 1.0)
    left = _distinct(rng, h, -2.0, -1.0)
    right = _distinct(rng, h, 2.0, 3.0)
    low = _distinct(rng, v, -2.0, -1.0)
    high = _distinct(rng, v, 2.0, 3.0)
    return SegmentSet(
        list(zip(left, right, ys)), list(zip(xis, low, high)), spec.meta
    )


def _separated(rng, spec):
    h = spec.n // 2
    v = spec.n - h
    xs = np.sort(_distinct(rng, 2 * h, 0.0, 1.0).reshape(h, 2), axis=1) if h else np.empty((0, 2))
    ys = _distinct(rng, h, 0.0, 1.0)
    xis = _distinct(rng, v, 2.0, 3.0)
    es = np.sort(_distinct(rng, 2 * v, 2.0, 3.0).reshape(v, 2), axis=1) if v else np.empty((0, 2))
    return SegmentSet(
        [(a, b, y) for (a, b), y in zip(xs.tolist(), ys.tolist())],
        [(x, a, b) for x, (a, b) in zip(xis.tolist(), es.tolist())],
        spec.meta,
    )


def _segint_random(rng, spec):
    h = spec.n // 2
    v = spec.n - h
    xs = _distinct(rng, 2 * h + v, 0.0, 1.0)
    ys = _distinct(rng, h + 2 * v, 0.0, 1.0)
    hx = np.sort(xs[:2 * h].reshape(h, 2), axis=1) if h else np.empty((0, 2))
    ve = np.sort(ys[h:].reshape(v, 2), axis=1) if v else np.empty((0, 2))
    return SegmentSet(
        [(a, b, y) for (a, b), y in zip(hx.tolist(), ys[:h].tolist())],
        [(x, a, b) for x, (a, b) in zip(xs[2 * h:].tolist(), ve.tolist())],
        spec.meta,
    )


def _range_random(rng, spec):
    m = int(spec.params.get("m", spec.n // 2))
    k = spec.n - m
    px = _distinct(rng, k + 2 * m, 0.0, 1.0)
    py = _distinct(rng, k + 2 * m, 0.0, 1.0)
    points = list(zip(px[:k].tolist(), py[:k].tolist()))
    rx = np.sort(px[k:].reshape(m, 2), axis=1) if m else np.empty((0, 2))
    ry = np.sort(py[k:].reshape(m, 2), axis=1) if m else np.empty((0, 2))
    rects = [(a, b, c, d) for (a, b), (c, d) in zip(rx.tolist(), ry.tolist())]
    return RangeInstance(points, rects, spec.meta)


def generate(spec):
    """Deterministic instance for (family, n, seed, params), certified nondegenerate."""
    rng = np.random.default_rng(spec.seed)
    for attempt in range(MAX_RETRIES):
        if spec.family == "segint-crossing-grid":
            inst = _crossing_grid(rng, spec)
        elif spec.family == "segint-separated":
            inst = _separated(rng, spec)
        elif spec.family == "segint-random":
            inst = _segint_random(rng, spec)
        elif spec.family == "rangerep-random":
            inst = _range_random(rng, spec)
        else:
            if spec.family == "clustered":
                pts, sizes = _clustered(rng, spec.n, spec.params.get("k", 4), spec.params.get("dim", 2))
            else:
                pts, sizes = POINT_GENERATORS[spec.family](rng, spec.n)
            if not _certify_points(spec, pts):
                logger.debug("generate %s n=%d: attempt %d not in general position", spec.family, spec.n, attempt)
                continue
            meta = spec.meta
            if sizes is not None:
                meta["known_sizes"] = sizes
            return PointSequence.from_array(pts, meta)
        try:
            return inst.validate()
        except DegenerateInputError:
            logger.debug("generate %s n=%d: attempt %d degenerate", spec.family, spec.n, attempt)
    raise DegenerateInputError(
        f"could not certify general position for {spec.family} n={spec.n} after {MAX_RETRIES} attempts"
    )


def _fmt(v):
    return repr(float(v))


def save(instance, path):
    with open(path, "w", encoding="utf-8") as f:
        for key, value in sorted(instance.meta.items()):
            f.write(f"# {key}={value}\n")
        if isinstance(instance, SegmentSet):
            for h in instance.horizontals:
                f.write("H " + " ".join(_fmt(c) for c in h) + "\n")
            for v in instance.verticals:
                f.write("V " + " ".join(_fmt(c) for c in v) + "\n")
        elif isinstance(instance, RangeInstance):
            for p in instance.points:
                f.write(" ".join(_fmt(c) for c in p) + "\n")
            for r in instance.rects:
                f.write("R " + " ".join(_fmt(c) for c in r) + "\n")
        else:
            for p in instance:
                f.write(" ".join(_fmt(c) for c in p) + "\n")


def _numbers(tokens, path, lineno):
    try:
        values = [float(t) for t in tokens]
    except ValueError:
        raise InstanceFormatError(f"not a number in {' '.join(tokens)!r}", path, lineno)
    if not all(math.isfinite(v) for v in values):
        raise InstanceFormatError("non-finite coordinate", path, lineno)
    return values


def load(path):
    points, horizontals, verticals, rects = [], [], [], []
    dim = None
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.readlines()
    except OSError as e:
        raise InstanceFormatError(f"cannot read instance: {e.strerror}", path) from e
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        tag = tokens[0]
        if tag in ("H", "V", "R"):
            want = 4 if tag == "R" else 3
            values = _numbers(tokens[1:], path, lineno)
            if len(values) != want:
                raise InstanceFormatError(f"{tag} line needs {want} values, got {len(values)}", path, lineno)
            {"H": horizontals, "V": verticals, "R": rects}[tag].append(tuple(values))
            continue
        values = _numbers(tokens, path, lineno)
        if len(values) not in (2, 3):
            raise InstanceFormatError(f"expected 2 or 3 columns, got {len(values)}", path, lineno)
        if dim is None:
            dim = len(values)
        elif len(values) != dim:
            raise InstanceFormatError(f"dimension mismatch: {len(values)} columns after {dim}", path, lineno)
        points.append(tuple(values))

    if horizontals or verticals:
        if points or rects:
            raise InstanceFormatError("segment file mixes in points or rectangles", path)
        return SegmentSet(horizontals, verticals)
    if rects:
        if dim not in (None, 2):
            raise InstanceFormatError("range files need 2-d points", path)
        return RangeInstance(points, rects)
    return PointSequence(points)
