"""Input validation helpers shared across modules."""
from __future__ import annotations

import numbers

import numpy as np


def check_rng(seed=None) -> np.random.Generator:
    """Turn ``seed`` into a ``numpy.random.Generator``.

    Accepts None, an int, a SeedSequence or an existing Generator (returned as is).
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, (numbers.Integral, np.random.SeedSequence)):
        return np.random.default_rng(seed)
    raise ValueError(f"{seed!r} cannot be used to seed a numpy Generator")


def check_coords(xy, name="coords") -> tuple[float, float]:
    arr = np.asarray(xy, dtype=float)
    if arr.shape != (2,):
        raise ValueError(f"{name} must be an (x, y) pair, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return float(arr[0]), float(arr[1])


def check_coord_array(xy, name="coords") -> np.ndarray:
    arr = np.asarray(xy, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"{name} must have shape (n, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


def check_positive_int(value, name, minimum=1) -> int:
    if not isinstance(value, numbers.Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_is_fitted(estimator, attribute):
    if not hasattr(estimator, attribute):
        from sklearn.exceptions import NotFittedError
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit(sys, gen) first")
