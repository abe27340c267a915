"""Input validation helpers used by the estimators and the run harness."""

import numbers

import numpy as np
from sklearn.exceptions import NotFittedError

__all__ = ["check_matrix", "check_vector", "check_fitted", "check_unit_interval"]


def check_matrix(X, name="X", min_rows=1):
    """Coerce ``X`` to a 2-d float64 array with finite entries."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={X.ndim}")
    if X.shape[0] < min_rows:
        raise ValueError(f"{name} needs at least {min_rows} row(s), got {X.shape[0]}")
    if X.shape[1] < 1:
        raise ValueError(f"{name} needs at least one feature column")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    return X


def check_vector(x, name="x", allow_empty=False):
    """Coerce ``x`` to a 1-d float64 array with finite entries."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got ndim={x.ndim}")
    if x.size == 0 and not allow_empty:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite values")
    return x


def check_fitted(estimator, attribute):
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )


def check_unit_interval(value, name, include_zero=False):
    """Validate a scalar in (0, 1], or [0, 1] when ``include_zero``."""
    if not isinstance(value, numbers.Real) or not np.isfinite(value):
        raise ValueError(f"{name} must be a finite real number, got {value!r}")
    value = float(value)
    low_ok = value >= 0.0 if include_zero else value > 0.0
    if not (low_ok and value <= 1.0):
        interval = "[0, 1]" if include_zero else "(0, 1]"
        raise ValueError(f"{name} must lie in {interval}, got {value}")
    return value
