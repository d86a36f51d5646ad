"""Independent reference implementations used as test oracles.

These are written for clarity rather than speed: brute-force grids, full
distance matrices and plain Python loops.  They share no code with the
package beyond the data they are handed.
"""

import math
import statistics

import numpy as np


# -- geometric circle fit by nested grid refinement --------------------------------

def geometric_minimizer(pts, tol=1e-6, points_per_axis=21):
    """Minimise sum (|p - c| - R)^2 over (a, b, R) by shrinking 3-D grids."""
    pts = np.asarray(pts, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    a, b = float(x.mean()), float(y.mean())
    r = float(np.hypot(x - a, y - b).mean())
    h = max(0.05 * r, 1.0)
    g = np.linspace(-1.0, 1.0, points_per_axis)
    spacing = 2.0 / (points_per_axis - 1)
    while h * spacing > tol / 10:
        A, B, R = np.meshgrid(a + h * g, b + h * g, r + h * g, indexing="ij")
        A, B, R = A.ravel(), B.ravel(), R.ravel()
        d = np.hypot(x[None, :] - A[:, None], y[None, :] - B[:, None]) - R[:, None]
        k = int(np.argmin(np.sum(d * d, axis=1)))
        ia, ib, ir = np.unravel_index(k, (points_per_axis,) * 3)
        a, b, r = float(A[k]), float(B[k]), float(R[k])
        on_edge = any(i in (0, points_per_axis - 1) for i in (ia, ib, ir))
        if not on_edge:
            h *= 2.0 * spacing
    return a, b, r


def kasa_circle(pts):
    """Algebraic circle through numpy's least squares (centred for conditioning)."""
    pts = np.asarray(pts, dtype=float)
    cx, cy = pts.mean(axis=0)
    u, v = pts[:, 0] - cx, pts[:, 1] - cy
    M = np.column_stack([2 * u, 2 * v, np.ones_like(u)])
    (a, b, c), *_ = np.linalg.lstsq(M, u * u + v * v, rcond=None)
    return a + cx, b + cy, math.sqrt(c + a * a + b * b)


def signed_residuals(pts, circle):
    a, b, r = circle
    return [math.hypot(x - a, y - b) - r for x, y in pts]


# -- filter rules --------------------------------------------------------------

def zscore_removed(pts, tau, rtol=1e-12):
    circle = kasa_circle(pts)
    res = signed_residuals(pts, circle)
    mu = statistics.fmean(res)
    sigma = statistics.pstdev(res)
    if sigma <= rtol * circle[2]:
        return []
    return [i for i, r in enumerate(res) if abs((r - mu) / sigma) > tau]


def mad_removed(pts, tau, eps):
    res = signed_residuals(pts, kasa_circle(pts))
    med = statistics.median(res)
    mad = statistics.median([abs(r - med) for r in res])
    return [i for i, r in enumerate(res) if abs(r - med) / (mad + eps) > tau]


def linear_percentile(values, p):
    s = sorted(values)
    pos = p / 100.0 * (len(s) - 1)
    lo = math.floor(pos)
    hi = min(lo + 1, len(s) - 1)
    return s[lo] + (pos - lo) * (s[hi] - s[lo])


def percentile_removed(pts, lo_p, hi_p, rtol=1e-12):
    circle = kasa_circle(pts)
    res = signed_residuals(pts, circle)
    lo, hi = linear_percentile(res, lo_p), linear_percentile(res, hi_p)
    if hi - lo <= rtol * circle[2]:
        return []
    return [i for i, r in enumerate(res) if r < lo or r > hi]


def distance_matrix(pts):
    pts = np.asarray(pts, dtype=float)
    return np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])


def auto_eps(pts):
    D = distance_matrix(pts)
    np.fill_diagonal(D, np.inf)
    return 3.0 * statistics.median(D.min(axis=1).tolist())


def dbscan_removed(pts, eps, min_pts):
    """Noise points: not core and not within eps of a core point."""
    D = distance_matrix(pts)
    n = len(D)
    core = [int(np.sum(D[i] <= eps)) >= min_pts for i in range(n)]
    noise = []
    for i in range(n):
        if core[i]:
            continue
        if not any(core[j] and D[i, j] <= eps for j in range(n)):
            noise.append(i)
    return noise


def lof_values(pts, k, cap=1e15):
    D = distance_matrix(pts)
    n = len(D)
    kdist, hoods = [], []
    for i in range(n):
        others = sorted((D[i, j], j) for j in range(n) if j != i)
        kd = others[k - 1][0]
        kdist.append(kd)
        hoods.append([j for d, j in others if d <= kd])
    lrd = []
    for i in range(n):
        reach = statistics.fmean(max(kdist[j], D[i, j]) for j in hoods[i])
        lrd.append(cap if reach <= 1.0 / cap else min(1.0 / reach, cap))
    return [statistics.fmean(lrd[j] for j in hoods[i]) / lrd[i] for i in range(n)]


def lof_removed(pts, k, tau):
    return [i for i, s in enumerate(lof_values(pts, k)) if s > tau]


def polar_sorted(pts):
    """(theta, r, index) triples about the centroid, sorted."""
    n = len(pts)
    cx = math.fsum(p[0] for p in pts) / n
    cy = math.fsum(p[1] for p in pts) / n
    rows = []
    for i, (x, y) in enumerate(pts):
        r = math.hypot(x - cx, y - cy)
        t = math.atan2(y - cy, x - cx) if r > 0 else 0.0
        if t == -math.pi:
            t = math.pi
        rows.append((t, r, i))
    return sorted(rows)


def pcod_sigmas(radii, w, s):
    n = len(radii)
    return [statistics.pstdev([radii[(st + k) % n] for k in range(w)]) for st in range(0, n, s)]


def pcod_removed(pts, w, s, T, rtol=1e-12):
    rows = polar_sorted([tuple(p) for p in np.asarray(pts, dtype=float)])
    radii = [r for _, r, _ in rows]
    n = len(radii)
    sigma_global = statistics.median(pcod_sigmas(radii, w, s))
    if sigma_global <= rtol * statistics.median(radii):
        return []
    removed = []
    for start in range(0, n, w):
        local = statistics.fmean(radii[(start + k) % n] for k in range(w))
        for pos in range(start, min(start + w, n)):
            if abs(radii[pos] - local) > T * sigma_global:
                removed.append(rows[pos][2])
    return sorted(removed)


# -- random contaminated point sets -----------------------------------------------

def contaminated_set(seed):
    """A noisy circle with one random kind of contamination.

    Uses numpy's generator so the data source is independent of the
    package's own PRNG and contamination code.
    """
    g = np.random.default_rng(seed)
    a, b = g.uniform(-500, 500, size=2)
    r = g.uniform(40, 400)
    n = int(g.integers(120, 300))
    if g.random() < 0.5:
        theta = 2 * np.pi * np.arange(n) / n
    else:
        theta = np.sort(g.uniform(0, 2 * np.pi, n))
    rad = r + g.normal(0, g.uniform(0.02, 0.5), n)
    pts = [np.column_stack([a + rad * np.cos(theta), b + rad * np.sin(theta)])]
    kind = int(g.integers(0, 4))
    if kind == 1:  # isolated points
        m = int(g.integers(1, 15))
        t = g.uniform(0, 2 * np.pi, m)
        rr = r + g.choice([-1, 1], m) * g.uniform(1, 30, m)
        pts.append(np.column_stack([a + rr * np.cos(t), b + rr * np.sin(t)]))
    elif kind == 2:  # burr arc
        m = int(g.integers(5, 30))
        t0 = g.uniform(0, 2 * np.pi)
        t = t0 + np.linspace(0, g.uniform(0.05, 0.5), m)
        rr = r + g.uniform(2, 15)
        pts.append(np.column_stack([a + rr * np.cos(t), b + rr * np.sin(t)]))
    elif kind == 3:  # blob
        m = int(g.integers(5, 30))
        t0 = g.uniform(0, 2 * np.pi)
        c = np.array([a + (r + 8) * np.cos(t0), b + (r + 8) * np.sin(t0)])
        pts.append(c + g.normal(0, 2.0, (m, 2)))
    out = np.vstack(pts)
    return out[g.permutation(len(out))]
