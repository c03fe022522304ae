"""Nesterov smoothing of the Euclidean distance ``x -> |x - a|``.

The smoothed function is a Huber-type profile: quadratic ``r**2 / (2 mu)``
for ``r <= mu`` and ``r - mu/2`` beyond. It underestimates the distance by at
most ``mu / 2`` and its gradient is the ball projection of ``(x - a) / mu``.
"""

import numpy as np

from .exceptions import DimensionError, DomainError
from .geometry import project_ball, row_norms

__all__ = ["smooth_norm", "smooth_norm_grad", "smoothing_residual", "huber"]


def _check(x, a, mu):
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    if x.shape[-1:] != a.shape[-1:]:
        raise DimensionError(f"dimension mismatch: {x.shape} vs {a.shape}")
    if not mu > 0:
        raise DomainError(f"smoothing parameter must be positive, got {mu}")
    return x, a


def huber(r, mu):
    """Smoothed distance as a function of ``r = |x - a|``.

    Equal to ``r**2/(2 mu) - (mu/2) * max(r/mu - 1, 0)**2`` but evaluated
    branch-wise, which avoids cancelling two ``O(r**2/mu)`` terms when
    ``mu`` is tiny.
    """
    r = np.asarray(r, dtype=float)
    return np.where(r <= mu, r * r / (2.0 * mu), r - 0.5 * mu)


def smooth_norm(x, a, mu):
    """Smoothed ``|x - a|``; broadcasts over leading axes."""
    x, a = _check(x, a, mu)
    val = huber(row_norms(x - a), mu)
    return float(val) if val.ndim == 0 else val


def smooth_norm_grad(x, a, mu):
    x, a = _check(x, a, mu)
    return project_ball((x - a) / mu)


def smoothing_residual(diff, mu):
    """``z - P(z; B)`` for ``z = diff / mu``, row-wise.

    This is the gradient of ``(mu/2) d(diff/mu; B)**2`` with respect to
    ``diff`` and appears in every smoothed component of both models.
    """
    z = diff / mu
    r = row_norms(z)
    return z * (np.maximum(r - 1.0, 0.0) / np.maximum(r, 1.0))[..., None]
