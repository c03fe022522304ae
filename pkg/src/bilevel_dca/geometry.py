"""Frobenius geometry on matrices and the unit-ball projection.

Vectors live on the last axis, so ``project_ball`` and ``dist_ball`` accept a
single vector or any stack of them (e.g. a ``(k, m, n)`` array of scaled
differences).
"""

import numpy as np

from .exceptions import DimensionError

__all__ = ["frobenius_inner", "frobenius_norm", "project_ball", "dist_ball", "row_norms"]


def frobenius_inner(X, Y):
    """Return ``trace(X.T @ Y)``, i.e. the sum of elementwise products."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != Y.shape:
        raise DimensionError(f"shape mismatch: {X.shape} vs {Y.shape}")
    return float(np.vdot(X, Y))


def frobenius_norm(X):
    return float(np.sqrt(frobenius_inner(X, X)))


def row_norms(V):
    """Euclidean norms along the last axis."""
    return np.sqrt(np.einsum("...j,...j->...", V, V))


def project_ball(v):
    """Euclidean projection onto the closed unit ball (boundary included)."""
    v = np.asarray(v, dtype=float)
    r = row_norms(v)
    scale = 1.0 / np.maximum(r, 1.0)
    return v * scale[..., None]


def dist_ball(v):
    """Distance to the closed unit ball, ``max(0, |v| - 1)``."""
    v = np.asarray(v, dtype=float)
    d = np.maximum(row_norms(v) - 1.0, 0.0)
    return float(d) if d.ndim == 0 else d
