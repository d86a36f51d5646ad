"""Fixture point sets shared by the test modules."""

import numpy as np

from robustcircle.geometry import Circle
from robustcircle.synthetic import ContaminationSpec, add_radial_noise, inject_outliers, sample_circle

TRUTH = Circle(12.5, -7.25, 100.0)


def unit4():
    return np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])


def clean():
    return sample_circle(TRUTH, 360, "equispaced")


def noisy():
    return add_radial_noise(clean(), TRUTH.center, 0.05, seed=42)


def clean_with_burr():
    """360 clean points plus 20 points at radius 110 over theta in [0.1, 0.3]."""
    spec = ContaminationSpec("burr_arc", 20, radial_offset=10.0, angular_span=0.2, start_angle=0.1)
    return inject_outliers(clean(), TRUTH, spec)


def at_radius(radius, thetas):
    thetas = np.asarray(thetas, dtype=float)
    return np.column_stack([TRUTH.a + radius * np.cos(thetas), TRUTH.b + radius * np.sin(thetas)])


def assert_circle(circle, expected, tol):
    got = np.array(tuple(circle))
    want = np.array(tuple(expected))
    assert np.all(np.abs(got - want) <= tol), f"{got} vs {want} (tol {tol})"
