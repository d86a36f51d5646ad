"""Pixel-to-millimetre calibration and the two error statistics."""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import EmptyInput, LengthMismatch, NonPositiveInput, TooFewValues


@dataclass(frozen=True)
class CalibrationFactor:
    mm_per_px: float
    reference_diameter_mm: float
    reference_diameter_px: float
    filter_method: str = "none"
    fitter: str = "lsf"

    def to_mm(self, px):
        return px * self.mm_per_px


def calibrate(reference_px, reference_mm, filter_method="none", fitter="lsf"):
    """Scale factor from a reference part of known diameter."""
    if not (math.isfinite(reference_px) and reference_px > 0):
        raise NonPositiveInput(f"reference pixel diameter must be positive, got {reference_px}")
    if not (math.isfinite(reference_mm) and reference_mm > 0):
        raise NonPositiveInput(f"reference diameter must be positive, got {reference_mm}")
    return CalibrationFactor(reference_mm / reference_px, reference_mm, reference_px,
                             filter_method, fitter)


def _abs_errors(estimates, truths):
    est = np.asarray(estimates, dtype=float)
    tru = np.asarray(truths, dtype=float)
    if est.shape != tru.shape:
        raise LengthMismatch(f"{est.size} estimates vs {tru.size} truths")
    return np.abs(est - tru)


def mae(estimates_mm, truths_mm):
    err = _abs_errors(estimates_mm, truths_mm)
    if err.size == 0:
        raise EmptyInput("MAE of no measurements")
    return float(np.mean(err))


def sdae(estimates_mm, truths_mm):
    """Population standard deviation of the absolute errors."""
    err = _abs_errors(estimates_mm, truths_mm)
    if err.size < 2:
        raise TooFewValues("SDAE needs at least two measurements")
    return float(np.std(err))
