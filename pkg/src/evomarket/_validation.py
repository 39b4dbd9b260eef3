"""Input validation helpers used by the public entry points."""

from __future__ import annotations

import numpy as np

from .errors import FormatError, NotFittedError


def as_float_array(values, name: str) -> np.ndarray:
    """Coerce to a 1-d float array, rejecting non-finite entries."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        arr = np.atleast_1d(arr.squeeze())
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def check_nonnegative(value: float, name: str) -> float:
    value = float(value)
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value}")
    return value


def check_unit_interval(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


def uniform_grid_step(times: np.ndarray, name: str = "times") -> float:
    """Return the grid step, raising FormatError when sampling is not uniform."""
    times = np.asarray(times, dtype=float)
    if times.size < 2:
        raise FormatError(f"{name} needs at least two samples")
    steps = np.diff(times)
    step = steps[0]
    if step <= 0 or not np.allclose(steps, step, rtol=1e-9, atol=1e-12):
        raise FormatError(f"{name} must be sampled on a uniform increasing grid")
    return float(step)


def check_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )
