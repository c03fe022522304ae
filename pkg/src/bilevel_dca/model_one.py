"""Model I: ``k`` free centers whose centroid acts as the total center.

The penalized tree cost ``f_lam = varphi + lam * phi`` is smoothed and split
as ``g - h`` with

* ``g1 = (1+lam)/(2 mu) sum_{i,l} |x^l - a^i|^2``
* ``g2 = 1/(2 mu) sum_l |x^l - x*|^2``
* ``h1 = (1+lam) mu/2 sum_{i,l} d((x^l - a^i)/mu; B)^2``
* ``h2 = mu/2 sum_l d((x^l - x*)/mu; B)^2``
* ``h3 = sum_i max_r sum_{l != r} |x^l - a^i|``
* ``h4 = lam sum_l max_s sum_{i != s} |x^l - a^i|``

where ``x*`` is the mean of the rows of ``X``. ``g`` is a strongly convex
quadratic, so ``grad g*`` is an explicit linear map.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _pairwise as pw
from .dca import DcOracles
from .exceptions import DimensionError, DomainError
from .geometry import dist_ball, row_norms
from .smoothing import huber, smoothing_residual

__all__ = ["ModelOne"]


def _grad_g(X, col_sum, m, lam, mu):
    c = (1.0 + lam) * m + 1.0
    return (c * X - X.mean(axis=0) - (1.0 + lam) * col_sum) / mu


def _grad_g_conj(Y, col_sum, m, lam, mu):
    # [c I - J]^{-1} = I/c + J/(c (c - 1)) because J is idempotent.
    c = (1.0 + lam) * m + 1.0
    R = (1.0 + lam) * col_sum + mu * Y
    return R / c + R.mean(axis=0) / (c * (c - 1.0))


@dataclass(frozen=True, eq=False)
class ModelOne:
    """Smoothed, penalized Model I on a fixed data matrix.

    Parameters
    ----------
    data : array of shape (m, n)
        Nodes, one per row.
    k : int
        Number of cluster centers, ``2 <= k <= m``.
    lam, mu : float
        Penalty (``>= 0``) and smoothing (``> 0``) parameters.
    """

    data: np.ndarray = field(repr=False)
    k: int
    lam: float
    mu: float

    def __post_init__(self):
        A = np.asarray(self.data, dtype=float)
        if A.ndim != 2 or A.shape[0] < 1:
            raise DimensionError("data must be a non-empty 2-D array")
        if not np.all(np.isfinite(A)):
            raise DomainError("data contains non-finite values")
        if self.k < 2:
            raise DomainError("Model I needs k >= 2")
        if self.k > A.shape[0]:
            raise DomainError(f"k={self.k} exceeds the number of nodes m={A.shape[0]}")
        if not (self.lam >= 0 and self.mu > 0):
            raise DomainError("need lam >= 0 and mu > 0")
        object.__setattr__(self, "data", A)
        object.__setattr__(self, "_col_sum", A.sum(axis=0))

    model_name = "I"
    n_rows = property(lambda self: self.k)

    @property
    def m(self):
        return self.data.shape[0]

    def with_params(self, lam, mu):
        return ModelOne(self.data, self.k, lam, mu)

    def _check(self, X):
        X = np.asarray(X, dtype=float)
        if X.shape != (self.k, self.data.shape[1]):
            raise DimensionError(f"expected a {(self.k, self.data.shape[1])} center matrix, got {X.shape}")
        return X

    def eval_true_objective(self, X):
        """Return ``(varphi, phi, f_lam)`` without smoothing."""
        X = self._check(X)
        _, dist = pw.pairwise_dist(X, self.data)
        centroid = X.mean(axis=0)
        varphi = float(dist.min(axis=0).sum() + row_norms(X - centroid).sum())
        phi = float(dist.min(axis=1).sum())
        return varphi, phi, varphi + self.lam * phi

    def components(self, X):
        """Values of ``g1, g2, h1, h2, h3, h4`` at ``X``."""
        X = self._check(X)
        lam, mu = self.lam, self.mu
        diff, dist = pw.pairwise_dist(X, self.data)
        link = X - X.mean(axis=0)
        return {
            "g1": (1.0 + lam) / (2.0 * mu) * float(np.sum(dist**2)),
            "g2": float(np.sum(link**2)) / (2.0 * mu),
            "h1": (1.0 + lam) * mu / 2.0 * float(np.sum(dist_ball(diff / mu) ** 2)),
            "h2": mu / 2.0 * float(np.sum(dist_ball(link / mu) ** 2)),
            "h3": pw.drop_nearest_center_value(dist),
            "h4": lam * pw.drop_nearest_node_value(dist),
        }

    def eval_smoothed_objective(self, X):
        """``g - h`` with each ``g1 - h1``, ``g2 - h2`` pair merged per norm.

        Summing the components separately loses about ``eps * |g|``
        absolute accuracy, which is large once ``mu`` has decayed.
        """
        X = self._check(X)
        _, dist = pw.pairwise_dist(X, self.data)
        links = row_norms(X - X.mean(axis=0))
        pos = (1.0 + self.lam) * huber(dist, self.mu).sum() + huber(links, self.mu).sum()
        neg = pw.drop_nearest_center_value(dist) + self.lam * pw.drop_nearest_node_value(dist)
        return float(pos - neg)

    def grad_g1(self, X):
        X = self._check(X)
        return (1.0 + self.lam) / self.mu * (self.m * X - self._col_sum)

    def grad_g2(self, X):
        X = self._check(X)
        return (X - X.mean(axis=0)) / self.mu

    def grad_g(self, X):
        X = self._check(X)
        return _grad_g(X, self._col_sum, self.m, self.lam, self.mu)

    def grad_g_conj(self, Y):
        Y = self._check(Y)
        return _grad_g_conj(Y, self._col_sum, self.m, self.lam, self.mu)

    def grad_h1(self, X):
        X = self._check(X)
        diff = pw.differences(X, self.data)
        return (1.0 + self.lam) * smoothing_residual(diff, self.mu).sum(axis=1)

    def grad_h2(self, X):
        X = self._check(X)
        q = smoothing_residual(X - X.mean(axis=0), self.mu)
        return q - q.mean(axis=0)

    def subgrad_h3(self, X):
        X = self._check(X)
        diff, dist = pw.pairwise_dist(X, self.data)
        return pw.drop_nearest_center_subgrad(diff, dist)

    def subgrad_h4(self, X):
        X = self._check(X)
        diff, dist = pw.pairwise_dist(X, self.data)
        return self.lam * pw.drop_nearest_node_subgrad(diff, dist)

    def h_subgrad(self, X):
        X = self._check(X)
        diff, dist = pw.pairwise_dist(X, self.data)
        out = (1.0 + self.lam) * smoothing_residual(diff, self.mu).sum(axis=1)
        q = smoothing_residual(X - X.mean(axis=0), self.mu)
        out += q - q.mean(axis=0)
        out += pw.drop_nearest_center_subgrad(diff, dist)
        out += self.lam * pw.drop_nearest_node_subgrad(diff, dist)
        return out

    def smoothing_gap_bound(self):
        """Upper bound on ``f_lam - f_lam_mu`` (``mu/2`` per smoothed norm)."""
        return 0.5 * self.mu * ((1.0 + self.lam) * self.m * self.k + self.k)

    def make_oracles(self):
        return DcOracles(
            h_subgrad=self.h_subgrad,
            g_conj_grad=self.grad_g_conj,
            objective=self.eval_smoothed_objective,
            grad_g=self.grad_g,
        )
