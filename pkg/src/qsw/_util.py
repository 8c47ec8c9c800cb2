import functools

import numpy as np

from .errors import DomainError


def as_points(omega):
    """Return ``omega`` as a float array and whether the caller passed a scalar."""
    arr = np.asarray(omega, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("evaluation points must be finite")
    return arr, arr.ndim == 0


def pointwise(method):
    """Decorate an evaluator ``f(self, omega)`` so scalars in give scalars out."""

    @functools.wraps(method)
    def wrapper(self, omega):
        arr, scalar = as_points(omega)
        out = method(self, np.atleast_1d(arr))
        if scalar:
            return out[0].item()
        return out.reshape(arr.shape)

    return wrapper


def reduce_angle(omega):
    """Map angles to [-pi, pi)."""
    return omega - 2 * np.pi * np.floor((omega + np.pi) / (2 * np.pi))
