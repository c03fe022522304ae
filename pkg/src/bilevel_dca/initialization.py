"""Starting points: random directions at a radius around the data median."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import DomainError
from .geometry import row_norms

__all__ = [
    "StartSpec",
    "median_point",
    "rad",
    "random_unit_rows",
    "random_start",
    "radial_starts",
    "multistart",
    "radial_search",
    "best_report",
    "profile",
]


@dataclass(frozen=True)
class StartSpec:
    """Randomized start parameters.

    ``gamma=None`` draws the radius multiplier uniformly from (0, 1).
    ``r0`` and ``n_probes`` define the radial-search grid ``i * r0``.
    """

    gamma: Optional[float] = None
    r0: float = 0.1
    n_probes: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.n_probes < 1:
            raise DomainError("n_probes must be at least 1")
        if not self.r0 > 0:
            raise DomainError("r0 must be positive")
        if self.gamma is not None and self.gamma < 0:
            raise DomainError("gamma must be nonnegative")


def median_point(A):
    """Coordinatewise median of the rows of ``A``."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] == 0:
        raise DomainError("empty data set")
    return np.median(A, axis=0)


def rad(A):
    """Largest distance from a node to :func:`median_point`."""
    A = np.asarray(A, dtype=float)
    return float(row_norms(A - median_point(A)).max())


def random_unit_rows(rng, rows, n):
    """Rows drawn uniformly from the unit sphere (normalized Gaussians)."""
    G = rng.standard_normal((rows, n))
    norms = row_norms(G)
    # a zero Gaussian draw has probability zero; redraw rather than divide by it
    while np.any(norms == 0):
        bad = norms == 0
        G[bad] = rng.standard_normal((int(bad.sum()), n))
        norms = row_norms(G)
    return G / norms[:, None]


def random_start(A, k_rows, spec=None, rng=None):
    """``median(A) + gamma * rad(A) * U`` with random unit rows ``U``.

    Randomness comes from ``rng`` when given, otherwise from ``spec.seed``.
    """
    if k_rows < 1:
        raise DomainError("k_rows must be at least 1")
    spec = spec or StartSpec()
    rng = rng if rng is not None else np.random.default_rng(spec.seed)
    A = np.asarray(A, dtype=float)
    U = random_unit_rows(rng, k_rows, A.shape[1])
    gamma = spec.gamma if spec.gamma is not None else float(rng.uniform(0.0, 1.0))
    return median_point(A) + gamma * rad(A) * U


def radial_starts(A, k_rows, spec):
    """Starting matrices ``median(A) + i r0 rad(A) U`` for ``i = 1..n_probes``.

    One direction matrix ``U`` (seeded by ``spec.seed``) is shared by every
    probe so that only the radius varies.
    """
    A = np.asarray(A, dtype=float)
    rng = np.random.default_rng(spec.seed)
    U = random_unit_rows(rng, k_rows, A.shape[1])
    med, r = median_point(A), rad(A)
    return [(i * spec.r0, med + i * spec.r0 * r * U) for i in range(1, spec.n_probes + 1)]


def _run_all(jobs, n_jobs):
    if n_jobs is None or n_jobs == 1:
        return [job() for job in jobs]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(lambda job: job(), jobs))


def best_report(reports):
    """Lowest snapped cost; the earliest report wins ties."""
    ok = [r for r in reports if r is not None and not isinstance(r, Exception)]
    if not ok:
        raise RuntimeError("every run failed")
    return min(ok, key=lambda r: r.snapped_cost)


def multistart(problem, schedule, seeds, gamma=None, tol=0.0, n_jobs=None, keep_objectives=False):
    """One continuation solve per seed from :func:`random_start`."""
    from .continuation import solve

    def job(seed):
        def run():
            x0 = random_start(problem.data, problem.n_rows, StartSpec(gamma=gamma, seed=seed))
            return solve(problem, schedule, x0, tol=tol, seed=seed, keep_objectives=keep_objectives)

        return run

    reports = _run_all([job(s) for s in seeds], n_jobs)
    return best_report(reports), reports


def radial_search(problem, schedule, spec, tol=0.0, n_jobs=None, keep_objectives=False):
    """Solve from every radial start; return ``(best, reports)``.

    A probe that raises is recorded as its exception in ``reports`` and the
    remaining probes still run. ``[(r.start_radius, r.snapped_cost) ...]``
    over the successful reports is the cost-versus-radius profile.
    """
    from .continuation import solve

    def job(radius, x0):
        def run():
            try:
                report = solve(problem, schedule, x0, tol=tol, seed=spec.seed, keep_objectives=keep_objectives)
            except ArithmeticError as exc:
                return exc
            report.start_radius = radius
            return report

        return run

    starts = radial_starts(problem.data, problem.n_rows, spec)
    reports = _run_all([job(r, x0) for r, x0 in starts], n_jobs)
    return best_report(reports), reports


def profile(reports):
    return [(r.start_radius, r.snapped_cost) for r in reports if not isinstance(r, Exception)]
