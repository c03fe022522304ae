"""scikit-learn style front end for the continuation solver."""

import numbers

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_array, check_is_fitted

from .continuation import ContinuationSchedule
from .exceptions import ConfigError
from .geometry import row_norms
from .initialization import StartSpec, multistart, radial_search
from .model_one import ModelOne
from .model_two import ModelTwo

__all__ = ["BilevelClustering", "make_problem"]


def make_problem(A, k, model):
    """Model instance with placeholder ``lam``/``mu``; the schedule overrides both."""
    model = str(model).upper()
    if model in ("I", "1"):
        return ModelOne(A, k, 0.0, 1.0)
    if model in ("II", "2"):
        return ModelTwo(A, k, 0.0, 1.0)
    raise ConfigError(f"model must be 'I' or 'II', got {model!r}")


class BilevelClustering(ClusterMixin, TransformerMixin, BaseEstimator):
    """Bilevel hierarchical clustering: ``k`` cluster centers and one total center.

    Parameters
    ----------
    n_clusters : int, default=3
        Number of cluster centers ``k``.
    model : {"I", "II"}, default="I"
        ``"I"`` links clusters to their centroid, ``"II"`` optimizes a free
        total center.
    lambda0, mu0, sigma1, sigma2, n_outer, n_inner
        Continuation schedule; see :class:`ContinuationSchedule`.
    init : {"random", "radial"}, default="random"
        ``"random"`` runs ``n_init`` seeded random starts, ``"radial"`` runs
        ``n_init`` radial probes ``i * r0`` sharing one direction matrix.
    n_init : int, default=10
    gamma : float or None
        Radius multiplier for random starts; ``None`` draws it per seed.
    r0 : float, default=0.1
        Radial probe spacing.
    tol : float, default=0.0
        Relative inner stopping tolerance; ``0`` always runs ``n_inner`` steps.
    random_state : int, RandomState or None
        Base seed. Run ``j`` uses seed ``random_state + j``.
    n_jobs : int or None
        Threads for the independent starts. Results do not depend on it.

    Attributes
    ----------
    cluster_centers_ : ndarray of shape (k, n)
        Snapped cluster centers (data nodes).
    total_center_ : ndarray of shape (n,)
    center_indices_ : tuple of int
    total_center_index_ : int
    continuous_centers_ : ndarray
        Solver output before snapping.
    labels_ : ndarray of shape (m,)
        Index of the serving center; ``k`` means the total center.
    cost_ : float
        Tree cost of the snapped solution.
    report_ : SolveReport
        Best run. ``reports_`` holds every run.
    """

    def __init__(
        self,
        n_clusters=3,
        model="I",
        lambda0=1e-6,
        mu0=100.0,
        sigma1=1.0,
        sigma2=0.5,
        n_outer=3,
        n_inner=180,
        init="random",
        n_init=10,
        gamma=None,
        r0=0.1,
        tol=0.0,
        random_state=0,
        n_jobs=None,
    ):
        self.n_clusters = n_clusters
        self.model = model
        self.lambda0 = lambda0
        self.mu0 = mu0
        self.sigma1 = sigma1
        self.sigma2 = sigma2
        self.n_outer = n_outer
        self.n_inner = n_inner
        self.init = init
        self.n_init = n_init
        self.gamma = gamma
        self.r0 = r0
        self.tol = tol
        self.random_state = random_state
        self.n_jobs = n_jobs

    def _schedule(self):
        return ContinuationSchedule(
            self.lambda0, self.mu0, self.sigma1, self.sigma2, self.n_outer, self.n_inner
        )

    def _base_seed(self):
        rs = self.random_state
        if rs is None or isinstance(rs, numbers.Integral):
            return 0 if rs is None else int(rs)
        return int(check_random_state(rs).randint(0, 2**31 - 1))

    def fit(self, X, y=None):
        """Solve on the rows of ``X``. ``y`` is ignored."""
        A = check_array(X, dtype=np.float64, ensure_min_samples=2)
        if not isinstance(self.n_clusters, numbers.Integral) or self.n_clusters < 2:
            raise ConfigError("n_clusters must be an integer >= 2")
        if self.n_init < 1:
            raise ConfigError("n_init must be >= 1")
        problem = make_problem(A, int(self.n_clusters), self.model)
        schedule = self._schedule()
        seed = self._base_seed()
        if self.init == "random":
            seeds = [seed + j for j in range(self.n_init)]
            best, reports = multistart(problem, schedule, seeds, self.gamma, self.tol, self.n_jobs)
        elif self.init == "radial":
            spec = StartSpec(gamma=None, r0=self.r0, n_probes=self.n_init, seed=seed)
            best, reports = radial_search(problem, schedule, spec, self.tol, self.n_jobs)
        else:
            raise ConfigError(f"init must be 'random' or 'radial', got {self.init!r}")

        nodes = list(best.snapped_centers) + [best.total_center]
        self.report_ = best
        self.reports_ = reports
        self.continuous_centers_ = best.final_centers
        self.center_indices_ = tuple(best.snapped_centers)
        self.total_center_index_ = int(best.total_center)
        self.cluster_centers_ = A[list(best.snapped_centers)]
        self.total_center_ = A[best.total_center]
        self._nodes = A[nodes]
        self.labels_ = np.argmin(self._distances(A), axis=1)
        self.cost_ = float(best.snapped_cost)
        self.n_features_in_ = A.shape[1]
        return self

    def _distances(self, A):
        return row_norms(A[:, None, :] - self._nodes[None, :, :])

    def _validate(self, X):
        check_is_fitted(self, "cost_")
        A = check_array(X, dtype=np.float64)
        if A.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {A.shape[1]} features, expected {self.n_features_in_}")
        return A

    def transform(self, X):
        """Distances to the ``k`` cluster centers followed by the total center."""
        return self._distances(self._validate(X))

    def predict(self, X):
        return np.argmin(self.transform(X), axis=1)

    def score(self, X, y=None):
        """Negative tree cost of serving ``X`` with the fitted centers."""
        D = self.transform(X)
        link = row_norms(self.cluster_centers_ - self.total_center_).sum()
        return -float(D.min(axis=1).sum() + link)
