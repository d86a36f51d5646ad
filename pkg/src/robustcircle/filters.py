"""Outlier filters applied to edge points before circle fitting.

Every filter returns a :class:`FilterReport` whose ``removed_indices`` refer
to the caller's ordering.  Residual-based filters (z-score, MAD, percentile)
score signed radial residuals against a preliminary LSF circle; DBSCAN and
LOF work on raw coordinates; PCOD works on radii about the centroid.
"""

from dataclasses import dataclass, fields

import numpy as np
from scipy.spatial import cKDTree

from .errors import InvalidConfig, TooFewPoints, UnknownMethod
from .fitters import fit_lsf
from .geometry import ZERO_SPREAD_RTOL, as_points, centroid, from_polar, residuals, to_polar

FILTERS = ("zscore", "mad", "dbscan", "lof", "percentile", "none", "pcod")

FILTER_LABELS = {
    "zscore": "Z-Score",
    "mad": "MAD",
    "dbscan": "DBSCAN",
    "lof": "LOF",
    "percentile": "Percentile",
    "none": "None",
    "pcod": "PCOD",
}

LRD_CAP = 1e15


@dataclass(frozen=True)
class FilterConfig:
    zscore_tau: float = 3.0
    mad_tau: float = 3.0
    mad_epsilon: float = 1e-12
    dbscan_eps: object = "auto"
    dbscan_min_pts: int = 4
    lof_k: int = 20
    lof_tau: float = 1.5
    percentile_lo: float = 2.275
    percentile_hi: float = 97.725
    pcod_window: int = 20
    pcod_stride: int = 10
    pcod_T: float = 3.0

    def __post_init__(self):
        if not 0 < self.percentile_lo < self.percentile_hi < 100:
            raise InvalidConfig("need 0 < percentile_lo < percentile_hi < 100")
        for name in ("zscore_tau", "mad_tau", "lof_tau", "pcod_T", "mad_epsilon"):
            if not getattr(self, name) > 0:
                raise InvalidConfig(f"{name} must be > 0")
        for name in ("dbscan_min_pts", "lof_k", "pcod_window", "pcod_stride"):
            if int(getattr(self, name)) < 1:
                raise InvalidConfig(f"{name} must be >= 1")
        if self.pcod_stride > self.pcod_window:
            raise InvalidConfig("pcod_stride must not exceed pcod_window")
        eps = self.dbscan_eps
        if isinstance(eps, str):
            if eps.lower() != "auto":
                raise InvalidConfig("dbscan_eps must be a positive number or 'auto'")
        elif eps is not None and not float(eps) > 0:
            raise InvalidConfig("dbscan_eps must be > 0")

    @classmethod
    def from_mapping(cls, values):
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise InvalidConfig(f"unknown filter options: {sorted(unknown)}")
        return cls(**values)


@dataclass(frozen=True)
class FilterReport:
    kept: np.ndarray
    removed_indices: np.ndarray
    method: str

    @property
    def removed_count(self):
        return len(self.removed_indices)


def _report(pts, remove, method, kept=None):
    remove = np.asarray(remove, dtype=bool)
    removed = np.flatnonzero(remove)
    if kept is None:
        kept = pts[~remove]
    return FilterReport(kept=kept, removed_indices=removed, method=method)


def preliminary_circle(ps):
    """Circle the residual-based filters measure against (algebraic LSF)."""
    return fit_lsf(ps).circle


# -- residual-based ---------------------------------------------------------------

def filter_zscore(ps, cfg=None):
    cfg = cfg or FilterConfig()
    pts = as_points(ps)
    circle = preliminary_circle(pts)
    res = residuals(pts, circle)
    sigma = float(np.std(res))
    if sigma <= ZERO_SPREAD_RTOL * circle.r:
        return _report(pts, np.zeros(len(pts), bool), "zscore")
    z = (res - np.mean(res)) / sigma
    return _report(pts, np.abs(z) > cfg.zscore_tau, "zscore")


def mad_scores(res, epsilon):
    med = np.median(res)
    dev = np.abs(res - med)
    return dev / (np.median(dev) + epsilon)


def filter_mad(ps, cfg=None):
    cfg = cfg or FilterConfig()
    pts = as_points(ps)
    res = residuals(pts, preliminary_circle(pts))
    return _report(pts, np.abs(mad_scores(res, cfg.mad_epsilon)) > cfg.mad_tau, "mad")


def filter_percentile(ps, cfg=None):
    """Keep points whose signed residual lies inside the percentile band."""
    cfg = cfg or FilterConfig()
    pts = as_points(ps)
    circle = preliminary_circle(pts)
    res = residuals(pts, circle)
    lo, hi = np.percentile(res, [cfg.percentile_lo, cfg.percentile_hi], method="linear")
    if hi - lo <= ZERO_SPREAD_RTOL * circle.r:
        return _report(pts, np.zeros(len(pts), bool), "percentile")
    return _report(pts, (res < lo) | (res > hi), "percentile")


# -- density-based ----------------------------------------------------------------

def _neighbourhoods(pts, tree, radii):
    """Indices and distances of points within ``radii[i]`` of point i.

    The KD-tree only proposes candidates; membership is decided on exactly
    the same ``hypot`` distances used everywhere else.
    """
    cands = tree.query_ball_point(pts, radii * (1.0 + 1e-9) + 1e-300)
    out = []
    for i, c in enumerate(cands):
        c = np.asarray(c, dtype=np.intp)
        d = np.hypot(pts[c, 0] - pts[i, 0], pts[c, 1] - pts[i, 1])
        out.append((c, d))
    return out


def auto_dbscan_eps(pts):
    """Three times the median nearest-neighbour distance."""
    if len(pts) < 2:
        return 0.0
    d, _ = cKDTree(pts).query(pts, k=2)
    return 3.0 * float(np.median(d[:, 1]))


def dbscan_labels(pts, eps, min_pts):
    """Return ``(core, noise)`` boolean masks."""
    n = len(pts)
    if n == 0:
        return np.zeros(0, bool), np.zeros(0, bool)
    tree = cKDTree(pts)
    hoods = _neighbourhoods(pts, tree, np.full(n, eps))
    members = [c[d <= eps] for c, d in hoods]
    core = np.array([len(m) >= min_pts for m in members])
    noise = np.array([not core[i] and not core[m].any() for i, m in enumerate(members)])
    return core, noise


def filter_dbscan(ps, cfg=None):
    cfg = cfg or FilterConfig()
    pts = as_points(ps)
    eps = cfg.dbscan_eps
    if eps is None or isinstance(eps, str):
        eps = auto_dbscan_eps(pts)
    _, noise = dbscan_labels(pts, float(eps), cfg.dbscan_min_pts)
    return _report(pts, noise, "dbscan")


def lof_scores(pts, k):
    n = len(pts)
    if n <= k:
        raise TooFewPoints(f"LOF with k={k} needs more than {k} points, got {n}")
    tree = cKDTree(pts)
    dk, _ = tree.query(pts, k=k + 1)
    hoods = _neighbourhoods(pts, tree, dk[:, k])
    kdist = np.empty(n)
    nbrs = []
    for i, (c, d) in enumerate(hoods):
        other = c != i
        c, d = c[other], d[other]
        kd = np.partition(d, k - 1)[k - 1]
        keep = d <= kd  # ties may push |N_k| above k
        kdist[i] = kd
        nbrs.append((c[keep], d[keep]))
    lrd = np.empty(n)
    for i, (c, d) in enumerate(nbrs):
        mean_reach = float(np.mean(np.maximum(kdist[c], d)))
        lrd[i] = LRD_CAP if mean_reach <= 1.0 / LRD_CAP else min(1.0 / mean_reach, LRD_CAP)
    return np.array([np.mean(lrd[c]) / lrd[i] for i, (c, _) in enumerate(nbrs)])


def filter_lof(ps, cfg=None):
    cfg = cfg or FilterConfig()
    pts = as_points(ps)
    return _report(pts, lof_scores(pts, cfg.lof_k) > cfg.lof_tau, "lof")


# -- PCOD ---------------------------------------------------------------------

@dataclass(frozen=True)
class PolarProfile:
    """Edge points in polar form about their centroid, sorted by angle."""

    center: tuple
    r: np.ndarray
    theta: np.ndarray
    original_index: np.ndarray
    window_sigmas: np.ndarray
    sigma_global: float


def _window_members(starts, width, n):
    return (starts[:, None] + np.arange(width)[None, :]) % n


def pcod_profile(ps, cfg=None):
    """Sort by angle and measure radial spread in strided windows.

    Windows hold exactly ``pcod_window`` consecutive sorted points, start
    every ``pcod_stride`` positions and wrap across the angular seam.  The
    spread is the population standard deviation; ``sigma_global`` is the
    median over windows.
    """
    cfg = cfg or FilterConfig()
    pts = as_points(ps)
    n, w = len(pts), cfg.pcod_window
    if n < w:
        raise TooFewPoints(f"PCOD window {w} exceeds the {n} available points")
    center = centroid(pts)
    r, theta = to_polar(pts, center)
    order = np.lexsort((np.arange(n), r, theta))
    rs = r[order]
    windows = rs[_window_members(np.arange(0, n, cfg.pcod_stride), w, n)]
    sigmas = np.sqrt(np.mean((windows - windows.mean(axis=1, keepdims=True)) ** 2, axis=1))
    return PolarProfile(center=center, r=rs, theta=theta[order], original_index=order,
                        window_sigmas=sigmas, sigma_global=float(np.median(sigmas)))


def pcod_flags(profile, window, T):
    """Outlier flags in sorted order.

    Detection windows tile the sorted sequence without overlap; the last
    one borrows points from the start to reach full width, but only its
    own points receive a verdict.
    """
    n = len(profile.r)
    if profile.sigma_global <= ZERO_SPREAD_RTOL * float(np.median(profile.r)):
        return np.zeros(n, bool)
    starts = np.arange(0, n, window)
    local_mean = profile.r[_window_members(starts, window, n)].mean(axis=1)
    dev = np.abs(profile.r - local_mean[np.arange(n) // window])
    return dev > T * profile.sigma_global


def filter_pcod(ps, cfg=None):
    """Polar-coordinate outlier detection.

    Survivors are returned through the inverse polar map about the
    centroid, so kept coordinates match the input up to roundoff.
    """
    cfg = cfg or FilterConfig()
    pts = as_points(ps)
    prof = pcod_profile(pts, cfg)
    flags = pcod_flags(prof, cfg.pcod_window, cfg.pcod_T)
    remove = np.zeros(len(pts), bool)
    remove[prof.original_index[flags]] = True
    keep = ~flags
    back = from_polar(prof.r[keep], prof.theta[keep], prof.center)
    kept = back[np.argsort(prof.original_index[keep], kind="stable")]
    return _report(pts, remove, "pcod", kept=kept)


# -- dispatch -----------------------------------------------------------------

def filter_none(ps, cfg=None):
    pts = as_points(ps)
    return _report(pts, np.zeros(len(pts), bool), "none")


_DISPATCH = {
    "none": filter_none,
    "zscore": filter_zscore,
    "mad": filter_mad,
    "dbscan": filter_dbscan,
    "lof": filter_lof,
    "percentile": filter_percentile,
    "pcod": filter_pcod,
}


def apply_filter(method, ps, cfg=None):
    try:
        func = _DISPATCH[method]
    except KeyError:
        raise UnknownMethod(
            f"unknown outlier filter {method!r}; choose from {', '.join(FILTERS)}") from None
    return func(ps, cfg or FilterConfig())
