"""The ten circle fitters behind one ``fit(name, points, cfg)`` entry point.

Algebraic fitters work in a normalised frame: points are shifted to their
centroid and divided by their RMS distance from it.  The shift is harmless
in exact arithmetic and keeps the moment matrices well conditioned; the
scaling makes every algebraic fitter scale-equivariant, including the two
unit-norm homogeneous solvers (TLS, EDCircle) whose raw objective is not.

Algebraic parameter vectors use the four-term form
``A (x^2 + y^2) + D x + E y + F = 0``; the familiar three-term form is the
special case ``A = 1``.
"""

import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import (
    DegenerateScale,
    InvalidConfig,
    NoAdmissibleEigenvalue,
    NoModelFound,
    SingularSystem,
    TooFewPoints,
    UnknownAlgorithm,
)
from .geometry import Circle, as_points, centroid, circles_from_triplets
from .linalg import jacobi_eigh, jacobi_svd
from .rng import XorShiftStar

FITTERS = (
    "lsf",
    "pratt",
    "taubin",
    "ransac",
    "irls",
    "hyperls",
    "mestimator",
    "lmeds",
    "tls",
    "edcircle",
)

FITTER_LABELS = {
    "lsf": "Geometric LS",
    "pratt": "Pratt",
    "taubin": "Taubin",
    "ransac": "RANSAC",
    "irls": "IRLS",
    "hyperls": "Hyper LS",
    "mestimator": "M-Estimator",
    "lmeds": "LMedS",
    "tls": "TLS",
    "edcircle": "EDCircle",
}

SCALE_EQUIVARIANT = ("pratt", "taubin", "hyperls", "tls", "edcircle")

SINGULAR_RATIO = 1e-12
EXACT_FIT_RATIO = 1e-12
MAD_TO_SIGMA = 1.4826

# Pratt's constraint D^2 + E^2 - 4 A F in (A, D, E, F) coordinates.
PRATT_CONSTRAINT = np.array([
    [0.0, 0.0, 0.0, -2.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [-2.0, 0.0, 0.0, 0.0],
])


@dataclass(frozen=True)
class FitConfig:
    ransac_iterations: int = 1000
    ransac_epsilon: float = 1.0
    lmeds_samples: int = 1000
    irls_delta_factor: float = 1.345
    max_irls_iterations: int = 100
    convergence_tol: float = 1e-10
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("ransac_iterations", "lmeds_samples", "max_irls_iterations"):
            if int(getattr(self, name)) < 1:
                raise InvalidConfig(f"{name} must be >= 1")
        for name in ("ransac_epsilon", "irls_delta_factor", "convergence_tol"):
            if not getattr(self, name) > 0:
                raise InvalidConfig(f"{name} must be > 0")

    @classmethod
    def from_mapping(cls, values):
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise InvalidConfig(f"unknown fit options: {sorted(unknown)}")
        return cls(**values)


@dataclass(frozen=True)
class FitResult:
    circle: Circle
    iterations: int = 1
    converged: bool = True
    inlier_count: int = 0


# -- normalised frame ---------------------------------------------------------

@dataclass(frozen=True)
class Frame:
    """Affine map between data coordinates and the fitting frame."""

    cx: float
    cy: float
    scale: float

    def forward(self, pts):
        return (pts[:, 0] - self.cx) / self.scale, (pts[:, 1] - self.cy) / self.scale

    def circle_back(self, a, b, r):
        return Circle(self.cx + self.scale * a, self.cy + self.scale * b, self.scale * r)


def normalized_frame(ps, min_points=3):
    pts = as_points(ps)
    if len(pts) < min_points:
        raise TooFewPoints(f"need at least {min_points} points, got {len(pts)}")
    cx, cy = centroid(pts)
    scale = math.sqrt(np.mean((pts[:, 0] - cx) ** 2 + (pts[:, 1] - cy) ** 2))
    if not scale > 0:
        raise SingularSystem("all points coincide")
    frame = Frame(cx, cy, scale)
    u, v = frame.forward(pts)
    return u, v, frame


def _check_spread(u, v):
    """Reject collinear or otherwise rank-deficient point sets."""
    M = np.column_stack([u, v, np.ones_like(u)])
    w, _ = jacobi_eigh(M.T @ M)
    if w[0] <= SINGULAR_RATIO * w[-1]:
        raise SingularSystem("design matrix is rank deficient (collinear points?)")


def _circle_from_vector(theta):
    A, D, E, F = theta
    if abs(A) <= 1e-14 * np.max(np.abs(theta)):
        raise SingularSystem("solution degenerated to a line")
    a = -D / (2.0 * A)
    b = -E / (2.0 * A)
    r2 = (D * D + E * E - 4.0 * A * F) / (4.0 * A * A)
    if not r2 > 0:
        raise SingularSystem("solution is an imaginary circle")
    return a, b, math.sqrt(r2)


def _result(frame, abr, **kw):
    return FitResult(frame.circle_back(*abr), **kw)


# -- LSF ----------------------------------------------------------------------

def _lsf_normalized(u, v):
    Z = np.column_stack([u, v, np.ones_like(u)])
    rhs = -(u * u + v * v)
    D, E, F = np.linalg.solve(Z.T @ Z, Z.T @ rhs)
    a, b = -D / 2.0, -E / 2.0
    r2 = a * a + b * b - F
    if not r2 > 0:
        raise SingularSystem("algebraic fit produced an imaginary circle")
    return a, b, math.sqrt(r2)


def fit_lsf(ps):
    """Algebraic least squares via the normal equations."""
    u, v, frame = normalized_frame(ps)
    _check_spread(u, v)
    return _result(frame, _lsf_normalized(u, v), inlier_count=len(u))


# -- Pratt / Hyper: constrained generalised eigenproblems -----------------------

def _moment_matrix(u, v):
    z = u * u + v * v
    return np.column_stack([z, u, v, np.ones_like(u)])


def hyper_constraint(u, v):
    """Hyper-accurate normalisation matrix (twice Taubin's minus Pratt's)."""
    zbar = float(np.mean(u * u + v * v))
    ubar, vbar = float(np.mean(u)), float(np.mean(v))
    return np.array([
        [8.0 * zbar, 4.0 * ubar, 4.0 * vbar, 2.0],
        [4.0 * ubar, 1.0, 0.0, 0.0],
        [4.0 * vbar, 0.0, 1.0, 0.0],
        [2.0, 0.0, 0.0, 0.0],
    ])


def taubin_constraint(u, v):
    zbar = float(np.mean(u * u + v * v))
    ubar, vbar = float(np.mean(u)), float(np.mean(v))
    return np.array([
        [4.0 * zbar, 2.0 * ubar, 2.0 * vbar, 0.0],
        [2.0 * ubar, 1.0, 0.0, 0.0],
        [2.0 * vbar, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ])


def constrained_vector(u, v, N):
    """Solve ``Z'Z theta = eta N theta`` for the smallest positive ``eta``.

    ``N`` must be invertible.  With ``Z = U S V'`` and ``Y = V S V'`` the
    pencil becomes the symmetric problem ``Y N^-1 Y y = eta y`` with
    ``theta = Y^-1 y``.  The result is scaled to ``theta' N theta = 1``.
    """
    s, V = jacobi_svd(_moment_matrix(u, v))
    if s[-1] <= EXACT_FIT_RATIO * s[0]:
        # data lie on a circle: the null vector is the exact answer
        theta = V[:, -1]
    else:
        Y = (V * s) @ V.T
        Yinv = (V / s) @ V.T
        w, E = jacobi_eigh(Y @ np.linalg.inv(N) @ Y)
        positive = np.flatnonzero(w > 0)
        if positive.size == 0:
            raise NoAdmissibleEigenvalue("no positive generalised eigenvalue")
        theta = Yinv @ E[:, positive[0]]
    q = float(theta @ N @ theta)
    if not q > 0:
        raise NoAdmissibleEigenvalue("solution violates the constraint sign")
    return theta / math.sqrt(q)


def fit_pratt(ps):
    """Pratt's fit: algebraic error under ``D^2 + E^2 - 4AF = 1``."""
    u, v, frame = normalized_frame(ps)
    _check_spread(u, v)
    theta = constrained_vector(u, v, PRATT_CONSTRAINT)
    return _result(frame, _circle_from_vector(theta), inlier_count=len(u))


def fit_hyperls(ps):
    """Hyper-accurate algebraic fit (Hyper-renormalised constraint)."""
    u, v, frame = normalized_frame(ps)
    _check_spread(u, v)
    theta = constrained_vector(u, v, hyper_constraint(u, v))
    return _result(frame, _circle_from_vector(theta), inlier_count=len(u))


# -- Taubin -------------------------------------------------------------------

def taubin_vector(u, v):
    """Taubin's parameter vector, satisfying ``theta' C_T theta = 1``.

    In a centred frame the optimal ``F`` is ``-A mean(z)``; substituting it
    leaves a 3-parameter problem whose constraint is a plain unit norm after
    rescaling ``A``, so the smallest right singular vector solves it.
    """
    z = u * u + v * v
    zbar = float(np.mean(z))
    root = 2.0 * math.sqrt(zbar)
    _, V = jacobi_svd(np.column_stack([(z - zbar) / root, u, v]))
    a_scaled, D, E = V[:, -1]
    A = a_scaled / root
    return np.array([A, D, E, -A * zbar])


def fit_taubin(ps):
    u, v, frame = normalized_frame(ps)
    _check_spread(u, v)
    return _result(frame, _circle_from_vector(taubin_vector(u, v)), inlier_count=len(u))


# -- TLS / EDCircle -----------------------------------------------------------

def design_matrix(u, v):
    """Homogeneous design matrix with rows ``[x, y, 1, -(x^2 + y^2)]``."""
    return np.column_stack([u, v, np.ones_like(u), -(u * u + v * v)])


def _homogeneous_circle(theta):
    if abs(theta[3]) < 1e-12:
        raise DegenerateScale("last component of the null vector vanishes")
    # rows [x, y, 1, -(x^2+y^2)] against [D, E, F, 1] encode
    # x^2 + y^2 - D x - E y - F = 0, hence the signs below
    D, E, F = theta[:3] / theta[3]
    a, b = D / 2.0, E / 2.0
    r2 = a * a + b * b + F
    if not r2 > 0:
        raise SingularSystem("homogeneous fit produced an imaginary circle")
    return a, b, math.sqrt(r2)


def tls_vector(u, v):
    _, V = jacobi_svd(design_matrix(u, v))
    return V[:, -1]


def edcircle_vector(u, v):
    A = design_matrix(u, v)
    _, V = jacobi_eigh(A.T @ A)
    return V[:, 0]


def fit_tls(ps):
    """Total least squares: smallest right singular vector of the design matrix."""
    u, v, frame = normalized_frame(ps)
    _check_spread(u, v)
    return _result(frame, _homogeneous_circle(tls_vector(u, v)), inlier_count=len(u))


def fit_edcircle(ps):
    """Same objective as TLS, solved through the 4x4 scatter matrix."""
    u, v, frame = normalized_frame(ps)
    _check_spread(u, v)
    return _result(frame, _homogeneous_circle(edcircle_vector(u, v)), inlier_count=len(u))


# -- sampling fitters -----------------------------------------------------------

def _sample_triplets(n, count, seed):
    rng = XorShiftStar(seed)
    return np.array([rng.triplet(n) for _ in range(count)], dtype=np.intp).reshape(count, 3)


def _batches(total, n):
    step = max(1, (1 << 21) // max(n, 1))
    for start in range(0, total, step):
        yield start, min(total, start + step)


def _candidate_residuals(pts, idx):
    a, b, r, ok = circles_from_triplets(pts[idx, 0], pts[idx, 1])
    with np.errstate(invalid="ignore"):
        res = np.hypot(pts[None, :, 0] - a[:, None], pts[None, :, 1] - b[:, None]) - r[:, None]
    return a, b, r, ok, res


def fit_ransac(ps, cfg=None):
    """RANSAC over exact triplet circles, then an LSF refit on the best consensus.

    The first candidate reaching the highest inlier count wins.
    """
    cfg = cfg or FitConfig()
    pts = as_points(ps)
    n = len(pts)
    if n < 3:
        raise TooFewPoints(f"RANSAC needs at least 3 points, got {n}")
    idx = _sample_triplets(n, cfg.ransac_iterations, cfg.rng_seed)
    best_count, best_mask, best_circle = -1, None, None
    for lo, hi in _batches(len(idx), n):
        a, b, r, ok, res = _candidate_residuals(pts, idx[lo:hi])
        inliers = np.abs(res) < cfg.ransac_epsilon
        counts = np.where(ok, inliers.sum(axis=1), -1)
        j = int(np.argmax(counts))
        if counts[j] > best_count:
            best_count = int(counts[j])
            best_mask = inliers[j]
            best_circle = Circle(float(a[j]), float(b[j]), float(r[j]))
    if best_circle is None or best_count < 0:
        raise NoModelFound("every sampled triplet was collinear")
    circle = best_circle
    if best_count >= 3:
        try:
            circle = fit_lsf(pts[best_mask]).circle
        except (SingularSystem, TooFewPoints):
            pass
    return FitResult(circle, iterations=cfg.ransac_iterations,
                     converged=best_count >= 3, inlier_count=best_count)


def fit_lmeds(ps, cfg=None):
    """Least median of squares over sampled triplet circles (no refit)."""
    cfg = cfg or FitConfig()
    pts = as_points(ps)
    n = len(pts)
    if n < 3:
        raise TooFewPoints(f"LMedS needs at least 3 points, got {n}")
    idx = _sample_triplets(n, cfg.lmeds_samples, cfg.rng_seed)
    best_med, best_circle = math.inf, None
    for lo, hi in _batches(len(idx), n):
        a, b, r, ok, res = _candidate_residuals(pts, idx[lo:hi])
        med = np.median(res * res, axis=1)
        med = np.where(ok, med, np.inf)
        j = int(np.argmin(med))
        if med[j] < best_med:
            best_med = float(med[j])
            best_circle = Circle(float(a[j]), float(b[j]), float(r[j]))
    if best_circle is None:
        raise NoModelFound("every sampled triplet was collinear")
    return FitResult(best_circle, iterations=cfg.lmeds_samples, converged=True, inlier_count=n)


# -- Huber-weighted geometric refinement ------------------------------------------

def robust_scale(res, about_median=True):
    """1.4826 times the median absolute deviation (about zero if asked)."""
    med = np.median(res) if about_median else 0.0
    return MAD_TO_SIGMA * float(np.median(np.abs(res - med)))


def huber_weights(res, delta):
    mag = np.abs(res)
    w = np.ones_like(mag)
    big = mag > delta
    w[big] = delta / mag[big]
    return w


def _geometric(u, v, p):
    d = np.hypot(u - p[0], v - p[1])
    return d - p[2], d


def _huber_refine(ps, cfg, about_median):
    """Weighted geometric Gauss-Newton iterations from the LSF estimate.

    Each outer iteration re-estimates the threshold from the current
    residuals, recomputes Huber weights and takes one Gauss-Newton step on
    the weighted geometric cost, halved until that cost does not increase.
    Parameters and the tolerance live in the normalised frame.
    """
    u, v, frame = normalized_frame(ps)
    _check_spread(u, v)
    p = np.array(_lsf_normalized(u, v))
    res, d = _geometric(u, v, p)
    # floor keeps delta meaningful on noise-free data
    floor = 1e-12
    converged = False
    it = 0
    for it in range(1, cfg.max_irls_iterations + 1):
        delta = max(cfg.irls_delta_factor * robust_scale(res, about_median), floor)
        w = huber_weights(res, delta)
        safe = np.where(d > 0, d, 1.0)
        J = np.column_stack([-(u - p[0]) / safe, -(v - p[1]) / safe, -np.ones_like(u)])
        J[d == 0, :2] = 0.0
        H = (J * w[:, None]).T @ J
        g = (J * w[:, None]).T @ res
        try:
            step = np.linalg.solve(H, -g)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem("singular Gauss-Newton system") from exc
        # allow for roundoff so tiny late steps are not mistaken for ascent
        cost = float(np.sum(w * res * res)) * (1.0 + 1e-12)
        t = 1.0
        for _ in range(40):
            trial = p + t * step
            tres, _ = _geometric(u, v, trial)
            if float(np.sum(w * tres * tres)) <= cost:
                break
            t *= 0.5
        else:
            t = 0.0
        p = p + t * step
        res, d = _geometric(u, v, p)
        if t * float(np.linalg.norm(step)) < cfg.convergence_tol:
            converged = True
            break
    if not p[2] > 0:
        raise SingularSystem("refinement produced a non-positive radius")
    return FitResult(frame.circle_back(*p), iterations=max(it, 1),
                     converged=converged, inlier_count=len(u))


def fit_irls(ps, cfg=None):
    """IRLS: the weight rule compares |r| with delta, so the scale is
    taken from |r| itself (median absolute residual)."""
    return _huber_refine(ps, cfg or FitConfig(), about_median=False)


def fit_mestimator(ps, cfg=None):
    """Huber M-estimator with delta from the MAD about the median residual."""
    return _huber_refine(ps, cfg or FitConfig(), about_median=True)


# -- dispatch -----------------------------------------------------------------

_CLOSED_FORM = {
    "lsf": fit_lsf,
    "pratt": fit_pratt,
    "taubin": fit_taubin,
    "hyperls": fit_hyperls,
    "tls": fit_tls,
    "edcircle": fit_edcircle,
}
_CONFIGURED = {
    "ransac": fit_ransac,
    "irls": fit_irls,
    "mestimator": fit_mestimator,
    "lmeds": fit_lmeds,
}


def fit(algorithm, ps, cfg=None):
    if algorithm in _CLOSED_FORM:
        return _CLOSED_FORM[algorithm](ps)
    if algorithm in _CONFIGURED:
        return _CONFIGURED[algorithm](ps, cfg or FitConfig())
    raise UnknownAlgorithm(f"unknown fitting algorithm {algorithm!r}; choose from {', '.join(FITTERS)}")


__all__ = [
    "FITTERS", "FITTER_LABELS", "SCALE_EQUIVARIANT", "FitConfig", "FitResult", "fit",
    "fit_lsf", "fit_pratt", "fit_taubin", "fit_ransac", "fit_irls", "fit_hyperls",
    "fit_mestimator", "fit_lmeds", "fit_tls", "fit_edcircle",
]
