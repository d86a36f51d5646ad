"""Points, circles, residuals and polar conversion.

A point set is an ``(n, 2)`` float array in pixel units; helpers accept
anything ``as_points`` can coerce.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import CollinearPoints, EmptySet, NonFiniteValue

# Spreads below this fraction of the working radius are roundoff, not data.
ZERO_SPREAD_RTOL = 1e-12
COLLINEAR_RTOL = 1e-9


@dataclass(frozen=True)
class Circle:
    a: float
    b: float
    r: float

    def __iter__(self):
        return iter((self.a, self.b, self.r))

    @property
    def center(self):
        return (self.a, self.b)

    @property
    def diameter(self):
        return 2.0 * self.r

    def translated(self, dx, dy):
        return Circle(self.a + dx, self.b + dy, self.r)


def as_points(ps):
    """Coerce to a contiguous float ``(n, 2)`` array, rejecting NaN/inf."""
    arr = np.asarray(ps, dtype=float)
    if arr.size == 0:
        return np.empty((0, 2))
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) point array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValue("point set contains NaN or infinite coordinates")
    return np.ascontiguousarray(arr)


def centroid(ps):
    pts = as_points(ps)
    if len(pts) == 0:
        raise EmptySet("centroid of an empty point set")
    # fsum is exactly rounded, so the result does not depend on point order
    n = len(pts)
    return (math.fsum(pts[:, 0]) / n, math.fsum(pts[:, 1]) / n)


def to_polar(ps, center):
    """Radii and angles of each point about ``center``, in input order.

    ``theta`` lies in (-pi, pi]; the centre itself maps to theta = 0.
    """
    pts = as_points(ps)
    if len(pts) == 0:
        raise EmptySet("to_polar of an empty point set")
    dx = pts[:, 0] - center[0]
    dy = pts[:, 1] - center[1]
    r = np.hypot(dx, dy)
    theta = np.arctan2(dy, dx)
    # arctan2 yields -pi for (-x, -0.0); fold onto the half-open interval
    theta[theta == -np.pi] = np.pi
    theta[r == 0.0] = 0.0
    return r, theta


def from_polar(r, theta, center):
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r < 0):
        raise ValueError("polar radii must be non-negative")
    if not (np.all(np.isfinite(r)) and np.all(np.isfinite(theta))):
        raise NonFiniteValue("non-finite polar coordinates")
    out = np.empty((len(r), 2))
    out[:, 0] = r * np.cos(theta) + center[0]
    out[:, 1] = r * np.sin(theta) + center[1]
    return out


def _collinear(x, y):
    """Scale-relative degeneracy test on (..., 3) coordinate arrays."""
    area2 = np.abs(x[..., 0] * (y[..., 1] - y[..., 2])
                   + x[..., 1] * (y[..., 2] - y[..., 0])
                   + x[..., 2] * (y[..., 0] - y[..., 1]))
    diag2 = (np.ptp(x, axis=-1) ** 2 + np.ptp(y, axis=-1) ** 2)
    return area2 <= COLLINEAR_RTOL * diag2


def circles_from_triplets(x, y):
    """Vectorised circumcircles for ``(m, 3)`` coordinate arrays.

    Returns ``(a, b, r, ok)``; rows with ``ok`` false are collinear and hold
    NaN parameters.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    # relative to the first vertex: keeps the result translation-stable
    bx, by = x[:, 1] - x[:, 0], y[:, 1] - y[:, 0]
    cx, cy = x[:, 2] - x[:, 0], y[:, 2] - y[:, 0]
    ok = ~_collinear(x - x[:, :1], y - y[:, :1])
    d = 2.0 * (bx * cy - by * cx)
    d = np.where(ok, d, np.nan)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return x[:, 0] + ux, y[:, 0] + uy, np.hypot(ux, uy), ok


def circle_from_three_points(p1, p2, p3):
    x = np.array([[p1[0], p2[0], p3[0]]], dtype=float)
    y = np.array([[p1[1], p2[1], p3[1]]], dtype=float)
    if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
        raise NonFiniteValue("non-finite triplet")
    a, b, r, ok = circles_from_triplets(x, y)
    if not ok[0]:
        raise CollinearPoints("the three points are collinear")
    return Circle(float(a[0]), float(b[0]), float(r[0]))


def residuals(ps, circle):
    """Signed radial residuals: distance to the centre minus the radius."""
    pts = as_points(ps)
    a, b, r = circle
    return np.hypot(pts[:, 0] - a, pts[:, 1] - b) - r
