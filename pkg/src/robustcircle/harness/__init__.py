"""File ingestion, calibration, metrics, the filter x fitter benchmark and the CLI."""

from .io import parse_points_file, write_points_file
from .metrics import CalibrationFactor, calibrate, mae, sdae
from .pipeline import BenchmarkTable, MeasurementRecord, run_benchmark, run_pipeline
from .report import emit_table, render_table

__all__ = [
    "BenchmarkTable",
    "CalibrationFactor",
    "MeasurementRecord",
    "calibrate",
    "emit_table",
    "mae",
    "parse_points_file",
    "render_table",
    "run_benchmark",
    "run_pipeline",
    "sdae",
    "write_points_file",
]
