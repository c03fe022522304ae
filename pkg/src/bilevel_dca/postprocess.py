"""Discrete post-processing: snap continuous centers to nodes and cost the tree.

The tree cost of ``k`` cluster-center nodes plus one total-center node is::

    sum_i min_{l <= k+1} |c_l - a^i| + sum_{l <= k} |c_l - t|

Nodes may attach directly to the total center.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .geometry import row_norms

__all__ = [
    "SnappedSolution",
    "snap_centers",
    "pick_total_center",
    "tree_cost",
    "snap",
    "discrete_optimum",
]


@dataclass(frozen=True)
class SnappedSolution:
    cluster_centers: tuple
    total_center: int
    assignment: np.ndarray
    cost: float

    @property
    def nodes(self):
        """Cluster-center indices followed by the total-center index."""
        return self.cluster_centers + (self.total_center,)


def _data(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] == 0:
        raise DomainError("empty data set")
    return A


def snap_centers(X, A):
    """Map each row of ``X`` to its nearest node index.

    Ties go to the smallest index. A center whose nearest node is already
    taken by an earlier row moves to its nearest unused node instead.
    """
    A = _data(A)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] > A.shape[0]:
        raise DomainError("more centers than nodes")
    dist = row_norms(X[:, None, :] - A[None, :, :])
    used = set()
    out = []
    for row in dist:
        # stable sort keeps the smallest index first among equal distances
        for idx in np.argsort(row, kind="stable"):
            idx = int(idx)
            if idx not in used:
                used.add(idx)
                out.append(idx)
                break
    return out


def pick_total_center(centers, A):
    """Node outside ``centers`` minimizing the summed distance to them."""
    A = _data(A)
    centers = [int(c) for c in centers]
    if len(set(centers)) >= A.shape[0]:
        raise DomainError("no node left for the total center")
    link = row_norms(A[None, :, :] - A[centers][:, None, :]).sum(axis=0)
    link[centers] = np.inf
    return int(np.argmin(link))


def _cost_and_assignment(A, centers, total):
    nodes = list(centers) + [total]
    dist = row_norms(A[:, None, :] - A[nodes][None, :, :])
    assignment = np.argmin(dist, axis=1)
    link = row_norms(A[list(centers)] - A[total]).sum()
    return float(dist.min(axis=1).sum() + link), assignment


def tree_cost(snapped, A):
    """Recompute the tree cost of ``snapped`` from scratch.

    ``snapped`` may be a :class:`SnappedSolution` or a ``(centers, total)``
    pair of node indices.
    """
    A = _data(A)
    if isinstance(snapped, SnappedSolution):
        centers, total = snapped.cluster_centers, snapped.total_center
    else:
        centers, total = snapped
    return _cost_and_assignment(A, centers, total)[0]


def snap(X, A, k):
    """Full reassignment pipeline on the first ``k`` rows of ``X``."""
    A = _data(A)
    X = np.asarray(X, dtype=float)
    if X.shape[0] < k:
        raise DomainError(f"need at least {k} center rows, got {X.shape[0]}")
    if k >= A.shape[0]:
        raise DomainError("no node left for the total center")
    centers = tuple(snap_centers(X[:k], A))
    total = pick_total_center(centers, A)
    cost, assignment = _cost_and_assignment(A, centers, total)
    return SnappedSolution(centers, total, assignment, cost)


def discrete_optimum(A, k, total_center="joint", max_subsets=5_000_000):
    """Exhaustive minimum tree cost over node choices.

    ``total_center="joint"`` minimizes over every cluster-center subset and
    every remaining total-center node. ``"rule"`` fixes the total center by
    :func:`pick_total_center`, i.e. the best cost the snapping pipeline can
    report. Returns ``(cost, (centers..., total))``.
    """
    A = _data(A)
    m = A.shape[0]
    if not 1 <= k < m:
        raise DomainError(f"need 1 <= k < m, got k={k}, m={m}")
    if total_center not in ("joint", "rule"):
        raise DomainError(f"unknown total_center mode {total_center!r}")
    n_subsets = math.comb(m, k)
    if n_subsets > max_subsets:
        raise DomainError(f"instance too large for enumeration: C({m},{k}) = {n_subsets}")

    D = row_norms(A[:, None, :] - A[None, :, :])
    best_cost, best = np.inf, None
    for combo in itertools.combinations(range(m), k):
        c = list(combo)
        near = D[c].min(axis=0)
        link = D[c].sum(axis=0)
        link[c] = np.inf
        if total_center == "rule":
            t = int(np.argmin(link))
            cost = float(np.minimum(near, D[t]).sum() + link[t])
        else:
            totals = np.minimum(near[None, :], D).sum(axis=1) + link
            t = int(np.argmin(totals))
            cost = float(totals[t])
        if cost < best_cost:
            best_cost, best = cost, tuple(c) + (t,)
    return best_cost, best
