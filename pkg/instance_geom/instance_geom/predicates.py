"""
Exact sign predicates.

Each predicate first evaluates the determinant in double precision and
accepts the sign when it clears a forward error bound; otherwise it falls
back to rational arithmetic on the exact binary values of the inputs.
"""
from fractions import Fraction

EPSILON = 2.0**-53
CCW_ERRBOUND = (3.0 + 16.0 * EPSILON) * EPSILON
O3D_ERRBOUND = (7.0 + 56.0 * EPSILON) * EPSILON


def _sign(value):
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def _all_floats(*coords):
    return all(type(c) is float for c in coords)


def orient2d_exact(a, b, c):
    ax, ay = Fraction(a[0]), Fraction(a[1])
    bx, by = Fraction(b[0]), Fraction(b[1])
    cx, cy = Fraction(c[0]), Fraction(c[1])
    return _sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def orient2d(a, b, c):
    """
    Sign of det(b - a, c - a): +1 counterclockwise, -1 clockwise, 0 collinear.
    """
    ax, ay = a[0], a[1]
    bx, by = b[0], b[1]
    cx, cy = c[0], c[1]
    if not _all_floats(ax, ay, bx, by, cx, cy):
        return orient2d_exact(a, b, c)

    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    errbound = CCW_ERRBOUND * (abs(detleft) + abs(detright))
    if det > errbound or -det > errbound:
        return 1 if det > 0 else -1
    return orient2d_exact(a, b, c)


def orient3d_exact(a, b, c, d):
    ax, ay, az = (Fraction(v) for v in a[:3])
    bx, by, bz = (Fraction(v) for v in b[:3])
    cx, cy, cz = (Fraction(v) for v in c[:3])
    dx, dy, dz = (Fraction(v) for v in d[:3])
    ux, uy, uz = bx - ax, by - ay, bz - az
    vx, vy, vz = cx - ax, cy - ay, cz - az
    wx, wy, wz = dx - ax, dy - ay, dz - az
    det = ux * (vy * wz - vz * wy) - uy * (vx * wz - vz * wx) + uz * (vx * wy - vy * wx)
    return _sign(det)


def orient3d(a, b, c, d):
    """
    Sign of det(b - a, c - a, d - a).

    With a, b, c counterclockwise seen from above, +1 means d lies above
    the plane through a, b, c.
    """
    if not _all_floats(*a[:3], *b[:3], *c[:3], *d[:3]):
        return orient3d_exact(a, b, c, d)

    adx, ady, adz = a[0] - d[0], a[1] - d[1], a[2] - d[2]
    bdx, bdy, bdz = b[0] - d[0], b[1] - d[1], b[2] - d[2]
    cdx, cdy, cdz = c[0] - d[0], c[1] - d[1], c[2] - d[2]

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    cdxady = cdx * ady
    adxcdy = adx * cdy
    adxbdy = adx * bdy
    bdxady = bdx * ady

    # det(a - d, b - d, c - d) has the opposite sign of det(b - a, c - a, d - a)
    det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady)
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * abs(adz)
        + (abs(cdxady) + abs(adxcdy)) * abs(bdz)
        + (abs(adxbdy) + abs(bdxady)) * abs(cdz)
    )
    errbound = O3D_ERRBOUND * permanent
    if det > errbound or -det > errbound:
        return -1 if det > 0 else 1
    return orient3d_exact(a, b, c, d)


def dominates(p, q):
    """True iff p is strictly greater than q on every axis."""
    if len(p) != len(q):
        raise ValueError(f"dimension mismatch: {len(p)} vs {len(q)}")
    return all(pi > qi for pi, qi in zip(p, q))
