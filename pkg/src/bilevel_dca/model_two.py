"""Model II: ``k`` cluster centers plus a free total center in the last row.

Rows ``0..k-1`` of ``X`` are cluster centers, row ``k`` is the total center
``t``. The smoothed, penalized cost splits as ``g - h`` with

* ``g1 = (1+lam)/(2 mu) sum_i sum_{l<=k} |x^l - a^i|^2``
* ``g2 = 1/(2 mu) sum_{l<k} |x^l - t|^2``
* ``h1 = 1/(2 mu) sum_i |t - a^i|^2``
* ``h2 = lam mu/2 sum_i d((t - a^i)/mu; B)^2``
* ``h3 = (1+lam) mu/2 sum_i sum_{l<k} d((x^l - a^i)/mu; B)^2``
* ``h4 = mu/2 sum_{l<k} d((x^l - t)/mu; B)^2``
* ``h5 = sum_i max_{r<k} sum_{l<k, l != r} |x^l - a^i|``
* ``h6 = lam sum_{l<=k} max_s sum_{i != s} |x^l - a^i|``

``g1 - h1 - h2`` restricted to ``t`` leaves ``lam`` times the smoothed
node distances, so the total center is only pulled toward nodes by the
penalty.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _pairwise as pw
from .dca import DcOracles
from .exceptions import DimensionError, DomainError
from .geometry import dist_ball, row_norms
from .smoothing import huber, smoothing_residual

__all__ = ["ModelTwo"]


def hessian_matrix(k, c1):
    """Dense ``c1 I + T`` (size ``k+1``); used only to cross-check the closed form."""
    M = c1 * np.eye(k + 1)
    M[k, :k] = -1.0
    M[:k, k] = -1.0
    M[k, k] += k - 1.0
    return M


def _conj_closed_form(R, k, c1):
    """Solve ``(c1 I + T) X = R`` row-wise in O(k n)."""
    denom = (c1 + k) * (c1 - 1.0)
    if not denom > 0:
        raise DomainError("singular conjugate system: (c1 + k)(c1 - 1) must be positive")
    X = np.empty_like(R)
    X[k] = (c1 * R[k] + R[:k].sum(axis=0)) / denom
    X[:k] = (R[:k] + X[k]) / c1
    return X


@dataclass(frozen=True, eq=False)
class ModelTwo:
    """Smoothed, penalized Model II; ``X`` has ``k + 1`` rows.

    ``conj_solver`` selects the production path for ``grad g*``: the
    row-wise closed form (``"closed"``) or a dense solve (``"dense"``).
    """

    data: np.ndarray = field(repr=False)
    k: int
    lam: float
    mu: float
    conj_solver: str = "closed"

    def __post_init__(self):
        A = np.asarray(self.data, dtype=float)
        if A.ndim != 2 or A.shape[0] < 1:
            raise DimensionError("data must be a non-empty 2-D array")
        if not np.all(np.isfinite(A)):
            raise DomainError("data contains non-finite values")
        if self.k < 2:
            raise DomainError("Model II needs k >= 2")
        if self.k + 1 > A.shape[0]:
            raise DomainError(f"k+1={self.k + 1} exceeds the number of nodes m={A.shape[0]}")
        if not (self.lam >= 0 and self.mu > 0):
            raise DomainError("need lam >= 0 and mu > 0")
        if self.conj_solver not in ("closed", "dense"):
            raise DomainError(f"unknown conj_solver {self.conj_solver!r}")
        object.__setattr__(self, "data", A)
        object.__setattr__(self, "_col_sum", A.sum(axis=0))

    model_name = "II"
    n_rows = property(lambda self: self.k + 1)

    @property
    def m(self):
        return self.data.shape[0]

    @property
    def c1(self):
        return 1.0 + (1.0 + self.lam) * self.m

    def with_params(self, lam, mu):
        return ModelTwo(self.data, self.k, lam, mu, self.conj_solver)

    def _check(self, X):
        X = np.asarray(X, dtype=float)
        if X.shape != (self.k + 1, self.data.shape[1]):
            raise DimensionError(
                f"expected a {(self.k + 1, self.data.shape[1])} center matrix, got {X.shape}"
            )
        return X

    def eval_true_objective(self, X):
        X = self._check(X)
        k = self.k
        _, dist = pw.pairwise_dist(X, self.data)
        varphi = float(dist[:k].min(axis=0).sum() + row_norms(X[:k] - X[k]).sum())
        phi = float(dist.min(axis=1).sum())
        return varphi, phi, varphi + self.lam * phi

    def components(self, X):
        X = self._check(X)
        k, lam, mu = self.k, self.lam, self.mu
        diff, dist = pw.pairwise_dist(X, self.data)
        link = X[:k] - X[k]
        return {
            "g1": (1.0 + lam) / (2.0 * mu) * float(np.sum(dist**2)),
            "g2": float(np.sum(link**2)) / (2.0 * mu),
            "h1": float(np.sum(dist[k] ** 2)) / (2.0 * mu),
            "h2": lam * mu / 2.0 * float(np.sum(dist_ball(diff[k] / mu) ** 2)),
            "h3": (1.0 + lam) * mu / 2.0 * float(np.sum(dist_ball(diff[:k] / mu) ** 2)),
            "h4": mu / 2.0 * float(np.sum(dist_ball(link / mu) ** 2)),
            "h5": pw.drop_nearest_center_value(dist[:k]),
            "h6": lam * pw.drop_nearest_node_value(dist),
        }

    def eval_smoothed_objective(self, X):
        """``g - h`` evaluated per smoothed norm (see :class:`ModelOne`)."""
        X = self._check(X)
        k, lam, mu = self.k, self.lam, self.mu
        _, dist = pw.pairwise_dist(X, self.data)
        links = row_norms(X[:k] - X[k])
        pos = (
            (1.0 + lam) * huber(dist[:k], mu).sum()
            + lam * huber(dist[k], mu).sum()
            + huber(links, mu).sum()
        )
        neg = pw.drop_nearest_center_value(dist[:k]) + lam * pw.drop_nearest_node_value(dist)
        return float(pos - neg)

    def grad_g1(self, X):
        X = self._check(X)
        return (1.0 + self.lam) / self.mu * (self.m * X - self._col_sum)

    def grad_g2(self, X):
        X = self._check(X)
        k = self.k
        out = np.empty_like(X)
        out[:k] = X[:k] - X[k]
        out[k] = k * X[k] - X[:k].sum(axis=0)
        return out / self.mu

    def grad_g(self, X):
        """``(1/mu) [c1 I + T] X - ((1+lam)/mu) E A``."""
        X = self._check(X)
        k = self.k
        TX = np.empty_like(X)
        TX[:k] = -X[k]
        TX[k] = (k - 1.0) * X[k] - X[:k].sum(axis=0)
        return (self.c1 * X + TX - (1.0 + self.lam) * self._col_sum) / self.mu

    def grad_g_conj(self, Y):
        """Solve ``grad_g(X) = Y`` for ``X``."""
        Y = self._check(Y)
        R = (1.0 + self.lam) * self._col_sum + self.mu * Y
        if self.conj_solver == "dense":
            return np.linalg.solve(hessian_matrix(self.k, self.c1), R)
        return self._conj_closed_form(R)

    def _conj_closed_form(self, R):
        return _conj_closed_form(R, self.k, self.c1)

    def grad_h1(self, X):
        X = self._check(X)
        out = np.zeros_like(X)
        out[self.k] = (self.m * X[self.k] - self._col_sum) / self.mu
        return out

    def grad_h2(self, X):
        X = self._check(X)
        out = np.zeros_like(X)
        out[self.k] = self.lam * smoothing_residual(X[self.k] - self.data, self.mu).sum(axis=0)
        return out

    def grad_h3(self, X):
        X = self._check(X)
        out = np.zeros_like(X)
        diff = pw.differences(X[: self.k], self.data)
        out[: self.k] = (1.0 + self.lam) * smoothing_residual(diff, self.mu).sum(axis=1)
        return out

    def grad_h4(self, X):
        X = self._check(X)
        k = self.k
        q = smoothing_residual(X[:k] - X[k], self.mu)
        out = np.empty_like(X)
        out[:k] = q
        out[k] = -q.sum(axis=0)
        return out

    def subgrad_h5(self, X):
        X = self._check(X)
        k = self.k
        diff, dist = pw.pairwise_dist(X[:k], self.data)
        out = np.zeros_like(X)
        out[:k] = pw.drop_nearest_center_subgrad(diff, dist)
        return out

    def subgrad_h6(self, X):
        X = self._check(X)
        diff, dist = pw.pairwise_dist(X, self.data)
        return self.lam * pw.drop_nearest_node_subgrad(diff, dist)

    def h_subgrad(self, X):
        X = self._check(X)
        k, lam, mu = self.k, self.lam, self.mu
        diff, dist = pw.pairwise_dist(X, self.data)
        out = lam * pw.drop_nearest_node_subgrad(diff, dist)
        out[:k] += pw.drop_nearest_center_subgrad(diff[:k], dist[:k])
        out[:k] += (1.0 + lam) * smoothing_residual(diff[:k], mu).sum(axis=1)
        q = smoothing_residual(X[:k] - X[k], mu)
        out[:k] += q
        out[k] += -q.sum(axis=0)
        out[k] += (self.m * X[k] - self._col_sum) / mu
        out[k] += lam * smoothing_residual(diff[k], mu).sum(axis=0)
        return out

    def smoothing_gap_bound(self):
        return 0.5 * self.mu * ((1.0 + self.lam) * self.m * self.k + self.k + self.lam * self.m)

    def make_oracles(self):
        return DcOracles(
            h_subgrad=self.h_subgrad,
            g_conj_grad=self.grad_g_conj,
            objective=self.eval_smoothed_objective,
            grad_g=self.grad_g,
        )
