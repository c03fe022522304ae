"""Center-to-node distance helpers shared by both models."""

import numpy as np

from .geometry import row_norms


def differences(X, A):
    """``D[l, i] = X[l] - A[i]``, shape ``(rows, m, n)``."""
    return X[:, None, :] - A[None, :, :]


def unit_rows(diff, dist):
    """Unit vectors ``diff / dist`` with ``0`` where ``dist == 0``.

    Zero is a valid element of the unit ball, hence a valid choice from the
    subdifferential of the norm at the origin.
    """
    safe = np.where(dist > 0, dist, 1.0)
    return np.where((dist > 0)[..., None], diff / safe[..., None], 0.0)


def drop_nearest_center_subgrad(diff, dist):
    """Subgradient of ``sum_i max_r sum_{l != r} |x^l - a^i|``.

    For each node the maximizing ``r`` is the nearest center (first index on
    ties); its row receives no contribution from that node.
    """
    units = unit_rows(diff, dist)
    r_star = np.argmin(dist, axis=0)
    keep = np.ones_like(dist, dtype=bool)
    keep[r_star, np.arange(dist.shape[1])] = False
    return np.einsum("lim,li->lm", units, keep.astype(float))


def drop_nearest_node_subgrad(diff, dist):
    """Subgradient of ``sum_l max_s sum_{i != s} |x^l - a^i|``."""
    units = unit_rows(diff, dist)
    s_star = np.argmin(dist, axis=1)
    rows = np.arange(dist.shape[0])
    return units.sum(axis=1) - units[rows, s_star]


def drop_nearest_center_value(dist):
    return float(np.sum(dist.sum(axis=0) - dist.min(axis=0)))


def drop_nearest_node_value(dist):
    return float(np.sum(dist.sum(axis=1) - dist.min(axis=1)))


def pairwise_dist(X, A):
    diff = differences(X, A)
    return diff, row_norms(diff)
