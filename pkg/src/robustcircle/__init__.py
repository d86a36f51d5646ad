"""Robust circle fitting, outlier filtering and a measurement benchmark."""

__version__ = "0.1.0"
