"""Seeded generators for circle edge points, noise and contamination.

The washer dataset imitates a batch of 23.7 +/- 0.1 mm discs imaged at a
fixed 100 px/mm.  Its contamination mixture is a stand-in: nothing about
the frequency or size of real burrs and dust is known, so the constants in
:class:`WasherModel` are plausible guesses and are reported as such.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import BadCount, InvalidConfig
from .geometry import Circle, as_points
from .rng import XorShiftStar, mix

CONTAMINATION_KINDS = ("isolated", "cluster_blob", "burr_arc")


@dataclass(frozen=True)
class ContaminationSpec:
    kind: str
    count: int
    radial_offset: float = 0.0
    angular_span: float = 0.1
    # None draws the arc/blob position from the generator
    start_angle: float = None

    def __post_init__(self):
        if self.kind not in CONTAMINATION_KINDS:
            raise InvalidConfig(f"unknown contamination kind {self.kind!r}")
        if self.count < 0:
            raise BadCount("contamination count must be >= 0")
        if self.kind != "isolated" and not 0 < self.angular_span <= 2 * math.pi:
            raise InvalidConfig("angular_span must lie in (0, 2*pi]")


@dataclass(frozen=True)
class SyntheticWorkpiece:
    points: np.ndarray
    truth: Circle
    true_diameter_mm: float
    px_per_mm: float
    outlier_indices: np.ndarray
    seed: int
    part_id: int = 0
    noise_sigma: float = 0.0
    contamination: ContaminationSpec = None


@dataclass(frozen=True)
class WasherModel:
    """Constants of the synthetic washer batch (a labelled stand-in)."""

    nominal_mm: float = 23.7
    tolerance_mm: float = 0.1
    px_per_mm: float = 100.0
    points_per_part: int = 1440
    center_px: float = 1500.0
    center_jitter_px: float = 25.0
    noise_sigma_px: tuple = (0.02, 0.08)
    # probabilities of none / isolated / cluster_blob / burr_arc
    mixture: tuple = (0.25, 0.25, 0.25, 0.25)
    isolated_count: tuple = (3, 12)
    isolated_offset_px: tuple = (0.5, 12.0)
    cluster_count: tuple = (8, 24)
    cluster_offset_px: tuple = (0.5, 6.0)
    cluster_span_rad: tuple = (0.003, 0.008)
    burr_count: tuple = (6, 24)
    burr_offset_px: tuple = (0.5, 6.0)
    burr_span_rad: tuple = (0.01, 0.04)
    label: str = field(default="synthetic stand-in contamination model")

    def as_dict(self):
        return asdict(self)


def sample_circle(circle, n, jitter="equispaced", seed=0):
    """Points exactly on ``circle``: equispaced angles or seeded uniform ones."""
    if n < 1:
        raise BadCount("need at least one sample")
    if not circle.r > 0:
        raise InvalidConfig("circle radius must be positive")
    if jitter == "equispaced":
        theta = 2.0 * np.pi * np.arange(n) / n
    elif jitter == "uniform_random":
        theta = 2.0 * np.pi * XorShiftStar(seed).uniforms(n)
    else:
        raise InvalidConfig(f"unknown jitter mode {jitter!r}")
    return np.column_stack([circle.a + circle.r * np.cos(theta),
                            circle.b + circle.r * np.sin(theta)])


def add_radial_noise(ps, center, sigma, seed=0):
    """Move each point along its ray from ``center`` by N(0, sigma)."""
    pts = as_points(ps)
    if sigma < 0:
        raise InvalidConfig("sigma must be >= 0")
    if sigma == 0 or len(pts) == 0:
        return pts.copy()
    dx = pts[:, 0] - center[0]
    dy = pts[:, 1] - center[1]
    d = np.hypot(dx, dy)
    safe = np.where(d > 0, d, 1.0)
    ux = np.where(d > 0, dx / safe, 1.0)
    uy = np.where(d > 0, dy / safe, 0.0)
    step = sigma * XorShiftStar(seed).normals(len(pts))
    return np.column_stack([pts[:, 0] + step * ux, pts[:, 1] + step * uy])


def inject_outliers(ps, truth, spec, seed=0):
    """Append contaminating points; returns ``(points, outlier_indices)``."""
    pts = as_points(ps)
    n = len(pts)
    if spec.count == 0:
        return pts.copy(), np.zeros(0, dtype=np.intp)
    rng = XorShiftStar(seed)
    radius = truth.r + spec.radial_offset
    start = spec.start_angle
    if spec.kind == "isolated":
        theta = 2.0 * np.pi * rng.uniforms(spec.count)
        extra = np.column_stack([truth.a + radius * np.cos(theta),
                                 truth.b + radius * np.sin(theta)])
    else:
        if start is None:
            start = 2.0 * math.pi * rng.random()
        if spec.kind == "burr_arc":
            steps = np.arange(spec.count) / max(spec.count - 1, 1)
            theta = start + spec.angular_span * steps
            extra = np.column_stack([truth.a + radius * np.cos(theta),
                                     truth.b + radius * np.sin(theta)])
        else:
            # blob centre mid-span; ~95% of the blob falls inside the span
            mid = start + 0.5 * spec.angular_span
            spread = spec.angular_span * abs(radius) / 4.0
            offsets = spread * rng.normals(2 * spec.count).reshape(spec.count, 2)
            extra = np.array([truth.a + radius * math.cos(mid),
                              truth.b + radius * math.sin(mid)]) + offsets
    out = np.vstack([pts, extra])
    return out, np.arange(n, n + spec.count, dtype=np.intp)


def _uniform_int(rng, lo_hi):
    lo, hi = lo_hi
    return lo + rng.below(hi - lo + 1)


def _washer_contamination(rng, model):
    u = rng.random()
    edges = np.cumsum(model.mixture)
    choice = int(np.searchsorted(edges, u, side="right"))
    if choice == 0 or choice > 3:
        return None
    kind = CONTAMINATION_KINDS[choice - 1]
    if kind == "isolated":
        offset = rng.uniform(*model.isolated_offset_px)
        if rng.random() < 0.5:
            offset = -offset
        return ContaminationSpec(kind, _uniform_int(rng, model.isolated_count), offset)
    if kind == "cluster_blob":
        return ContaminationSpec(kind, _uniform_int(rng, model.cluster_count),
                                 rng.uniform(*model.cluster_offset_px),
                                 rng.uniform(*model.cluster_span_rad))
    return ContaminationSpec(kind, _uniform_int(rng, model.burr_count),
                             rng.uniform(*model.burr_offset_px),
                             rng.uniform(*model.burr_span_rad))


def make_washer_part(part_id, seed, model=None):
    model = model or WasherModel()
    part_seed = mix(seed, part_id)
    rng = XorShiftStar(part_seed)
    lo = model.nominal_mm - model.tolerance_mm
    hi = model.nominal_mm + model.tolerance_mm
    diameter_mm = rng.uniform(lo, hi)
    truth = Circle(model.center_px + rng.uniform(-model.center_jitter_px, model.center_jitter_px),
                   model.center_px + rng.uniform(-model.center_jitter_px, model.center_jitter_px),
                   0.5 * diameter_mm * model.px_per_mm)
    pts = sample_circle(truth, model.points_per_part, "equispaced")
    common = dict(truth=truth, true_diameter_mm=diameter_mm, px_per_mm=model.px_per_mm,
                  seed=part_seed, part_id=part_id)
    if part_id == 0:
        # calibration reference: clean by construction
        return SyntheticWorkpiece(points=pts, outlier_indices=np.zeros(0, dtype=np.intp), **common)
    sigma = rng.uniform(*model.noise_sigma_px)
    spec = _washer_contamination(rng, model)
    pts = add_radial_noise(pts, truth.center, sigma, seed=mix(part_seed, 1))
    outliers = np.zeros(0, dtype=np.intp)
    if spec is not None:
        pts, outliers = inject_outliers(pts, truth, spec, seed=mix(part_seed, 2))
    return SyntheticWorkpiece(points=pts, outlier_indices=outliers, noise_sigma=sigma,
                              contamination=spec, **common)


def make_washer_dataset(num_parts=45, seed=2024, model=None):
    """``num_parts`` synthetic washers; part 0 is the noise-free reference."""
    if num_parts < 2:
        raise BadCount("a washer dataset needs a reference part plus at least one more")
    return [make_washer_part(i, seed, model) for i in range(num_parts)]
