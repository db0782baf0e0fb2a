"""Input validation helpers used by the estimators and functional API."""

from __future__ import annotations

import numpy as np

from .exceptions import AsymmetricMatrix, DimensionMismatch, NonFinite

SYMMETRY_RTOL = 1e-9


def as_float_array(x, *, name: str = "array") -> np.ndarray:
    """Convert to a float64 ndarray and reject non-finite entries."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{name} contains NaN or infinite entries")
    return arr


def as_samples(x, *, dim: int | None = None, name: str = "X") -> np.ndarray:
    """Validate a 2-D samples matrix with rows as observations."""
    arr = as_float_array(x, name=name)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionMismatch(
            f"{name} has {arr.shape[1]} features, expected {dim}"
        )
    return arr


def as_labels(y, *, n_samples: int | None = None, name: str = "y") -> np.ndarray:
    """Validate an integer label vector."""
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {arr.shape}")
    if n_samples is not None and arr.shape[0] != n_samples:
        raise DimensionMismatch(
            f"{name} has {arr.shape[0]} entries, expected {n_samples}"
        )
    return arr.astype(int, copy=False)


def check_square(m, *, name: str = "matrix") -> np.ndarray:
    arr = as_float_array(m, name=name)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be square 2-D, got shape {arr.shape}")
    return arr


def check_symmetric(m, *, rtol: float = SYMMETRY_RTOL, name: str = "matrix") -> np.ndarray:
    """Validate symmetry and return the symmetrized matrix (M + M.T) / 2.

    Asymmetry is measured relative to the largest absolute entry; anything
    above ``rtol`` is rejected rather than silently averaged away.
    """
    arr = check_square(m, name=name)
    gap = float(np.max(np.abs(arr - arr.T))) if arr.size else 0.0
    scale = float(np.max(np.abs(arr))) if arr.size else 0.0
    if gap > rtol * max(scale, 1e-300):
        raise AsymmetricMatrix(
            f"{name} asymmetry {gap:.3e} exceeds {rtol:.1e} relative tolerance"
        )
    return (arr + arr.T) / 2.0
