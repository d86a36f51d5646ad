"""Filter -> fit -> calibrate, for one point set or a whole benchmark grid."""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from ..errors import BadCount, CircleFitError, EmptyDataset, PipelineError, UsageError
from ..filters import FILTERS, FilterConfig, apply_filter
from ..fitters import FITTERS, FitConfig, fit
from ..rng import mix
from .metrics import calibrate, mae, sdae

CALIBRATION_FITTER = "lsf"


@dataclass(frozen=True)
class MeasurementRecord:
    part_id: int
    diameter_px: float
    diameter_mm: float
    removed_count: int
    fit_converged: bool


def run_pipeline(ps, filter_method, fitter, fcfg=None, ccfg=None, cal=None, part_id=0):
    """Filter the points, fit the survivors and convert the diameter to mm.

    Stage failures are re-raised as :class:`PipelineError` naming the stage;
    unknown method names propagate unchanged.  Without ``cal`` the result is
    reported with ``diameter_mm`` equal to NaN.
    """
    try:
        report = apply_filter(filter_method, ps, fcfg or FilterConfig())
    except UsageError:
        raise
    except CircleFitError as exc:
        raise PipelineError("filter", exc) from exc
    try:
        result = fit(fitter, report.kept, ccfg or FitConfig())
    except UsageError:
        raise
    except CircleFitError as exc:
        raise PipelineError("fit", exc) from exc
    d_px = 2.0 * result.circle.r
    d_mm = d_px * cal.mm_per_px if cal is not None else math.nan
    return MeasurementRecord(part_id, d_px, d_mm, report.removed_count, result.converged)


@dataclass
class BenchmarkTable:
    filters: tuple
    fitters: tuple
    mae_mm: np.ndarray
    sdae_mm: np.ndarray
    num_parts: int
    seed: int = None
    metadata: dict = field(default_factory=dict)

    def value(self, metric, filter_method, fitter):
        grid = self.mae_mm if metric == "mae" else self.sdae_mm
        return float(grid[self.filters.index(filter_method), self.fitters.index(fitter)])


def measure_part(points, fcfg, ccfg, filters=FILTERS, fitters=FITTERS):
    """Pixel diameters for every (filter, fitter) pair; NaN marks a failure."""
    out = np.full((len(filters), len(fitters)), np.nan)
    for i, method in enumerate(filters):
        try:
            kept = apply_filter(method, points, fcfg).kept
        except UsageError:
            raise
        except CircleFitError:
            continue
        for j, algo in enumerate(fitters):
            try:
                out[i, j] = 2.0 * fit(algo, kept, ccfg).circle.r
            except UsageError:
                raise
            except CircleFitError:
                pass
    return out


def _measure_task(args):
    return measure_part(*args)


def run_benchmark(dataset, fcfg=None, ccfg=None, *, per_filter_calibration=False,
                  include_reference=False, jobs=1, seed=None,
                  filters=FILTERS, fitters=FITTERS):
    """MAE/SDAE grid over every (filter, fitter) pair.

    Part 0 calibrates each cell; the remaining parts are measured against
    ``true_diameter_mm``.  A cell in which any part (or the reference) fails
    is NaN.  Stochastic fitters get a per-part seed derived from
    ``ccfg.rng_seed`` so that the schedule cannot influence the result.
    """
    if not dataset:
        raise EmptyDataset("benchmark needs at least a reference part")
    if len(dataset) < 2:
        raise BadCount("benchmark needs a reference part plus at least one more")
    fcfg = fcfg or FilterConfig()
    ccfg = ccfg or FitConfig()
    filters, fitters = tuple(filters), tuple(fitters)
    tasks = [(part.points, fcfg, replace(ccfg, rng_seed=mix(ccfg.rng_seed, i)), filters, fitters)
             for i, part in enumerate(dataset)]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            px = np.stack(list(pool.map(_measure_task, tasks)))
    else:
        px = np.stack([_measure_task(t) for t in tasks])

    truths = np.array([p.true_diameter_mm for p in dataset])
    measured = slice(0, None) if include_reference else slice(1, None)
    cal_col = fitters.index(CALIBRATION_FITTER) if per_filter_calibration else None
    mae_grid = np.full((len(filters), len(fitters)), np.nan)
    sdae_grid = np.full_like(mae_grid, np.nan)
    for i, method in enumerate(filters):
        for j, algo in enumerate(fitters):
            ref_px = px[0, i, j if cal_col is None else cal_col]
            if not (np.isfinite(ref_px) and ref_px > 0):
                continue
            cal = calibrate(float(ref_px), float(truths[0]), method,
                            algo if cal_col is None else CALIBRATION_FITTER)
            est = px[measured, i, j] * cal.mm_per_px
            if not np.all(np.isfinite(est)):
                continue
            mae_grid[i, j] = mae(est, truths[measured])
            if len(est) >= 2:
                sdae_grid[i, j] = sdae(est, truths[measured])

    meta = {
        "units": "mm",
        "calibration": "per-filter (LSF reference)" if per_filter_calibration else "per (filter, fitter)",
        "reference_in_statistics": bool(include_reference),
        "filter_config": asdict(fcfg),
        "fit_config": asdict(ccfg),
    }
    return BenchmarkTable(filters, fitters, mae_grid, sdae_grid, len(dataset), seed, meta)
