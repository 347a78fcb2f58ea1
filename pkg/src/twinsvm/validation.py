"""Input validation helpers used at every public entry point."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def as_matrix(X, name: str = "X", *, allow_empty: bool = False) -> np.ndarray:
    """Coerce to a 2-D float64 array with finite entries."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1 and arr.size == 0 and allow_empty:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be a 2-D array, got ndim={arr.ndim}")
    if not allow_empty and arr.shape[0] == 0:
        raise ValidationError(f"{name} must contain at least one row")
    if arr.size and not np.isfinite(arr).all():
        raise ValidationError(f"{name} contains NaN or infinite values")
    return arr


def as_vector(x, name: str = "x") -> np.ndarray:
    """Coerce to a 1-D float64 array with finite entries."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be a 1-D array, got ndim={arr.ndim}")
    if arr.size and not np.isfinite(arr).all():
        raise ValidationError(f"{name} contains NaN or infinite values")
    return arr


def check_feature_count(arr: np.ndarray, expected: int, name: str = "X") -> None:
    if arr.shape[-1] != expected:
        raise ValidationError(
            f"{name} has {arr.shape[-1]} features, expected {expected}"
        )


def check_same_length(a, b, name_a: str = "y_true", name_b: str = "y_pred") -> None:
    if len(a) != len(b):
        raise ValidationError(
            f"{name_a} and {name_b} have different lengths ({len(a)} vs {len(b)})"
        )


def check_positive(value: float, name: str) -> None:
    if not np.isfinite(value) or value <= 0:
        raise ValidationError(f"{name} must be a positive finite number, got {value}")
