"""Outer loop: geometric penalty growth and smoothing decay around the DCA."""

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dca import dca_run, is_monotone
from .exceptions import ConfigError, DomainError, NumericalFailure
from .postprocess import snap

__all__ = ["ContinuationSchedule", "SolveReport", "derive_sigmas", "solve", "PRESETS"]


def derive_sigmas(lambda0, lambda_max, mu0, mu_min, n_outer):
    """Per-step factors that take ``lambda0 -> lambda_max`` and ``mu0 -> mu_min``
    in ``n_outer`` multiplications."""
    if min(lambda0, lambda_max, mu0, mu_min) <= 0 or n_outer < 1:
        raise DomainError("schedule bounds must be positive and n_outer >= 1")
    if lambda_max < lambda0:
        raise DomainError("lambda_max must be >= lambda0")
    if mu_min > mu0:
        raise DomainError("mu_min must be <= mu0")
    return (lambda_max / lambda0) ** (1.0 / n_outer), (mu_min / mu0) ** (1.0 / n_outer)


@dataclass(frozen=True)
class ContinuationSchedule:
    """Outer-loop parameters: ``lambda_i = lambda0 sigma1**i``, ``mu_i = mu0 sigma2**i``.

    Defaults are the EIL76 configuration (540 DCA steps in total).
    """

    lambda0: float = 1e-6
    mu0: float = 100.0
    sigma1: float = 1.0
    sigma2: float = 0.5
    n_outer: int = 3
    n_inner: int = 180

    def __post_init__(self):
        if not (self.lambda0 > 0 and self.mu0 > 0):
            raise ConfigError("lambda0 and mu0 must be positive")
        if self.sigma1 < 1:
            raise ConfigError("sigma1 must be >= 1")
        if not 0 < self.sigma2 <= 1:
            raise ConfigError("sigma2 must lie in (0, 1]")
        if self.n_outer < 1 or self.n_inner < 1:
            raise ConfigError("n_outer and n_inner must be >= 1")

    @classmethod
    def from_bounds(cls, lambda0, lambda_max, mu0, mu_min, n_outer, n_inner):
        s1, s2 = derive_sigmas(lambda0, lambda_max, mu0, mu_min, n_outer)
        return cls(lambda0, mu0, s1, s2, n_outer, n_inner)

    @classmethod
    def from_total_ratio(cls, lambda0, ratio, mu0, sigma2, n_outer, n_inner):
        """Spread a total penalty growth ``lambda_max / lambda0 = ratio`` evenly."""
        if not ratio >= 1:
            raise ConfigError("penalty ratio must be >= 1")
        return cls(lambda0, mu0, ratio ** (1.0 / n_outer), sigma2, n_outer, n_inner)

    @property
    def lambda_max(self):
        return self.lambda0 * self.sigma1**self.n_outer

    @property
    def mu_min(self):
        return self.mu0 * self.sigma2**self.n_outer

    def parameters(self):
        """``(lambda_i, mu_i)`` used by outer iterations ``i = 0..n_outer-1``."""
        lam, mu = self.lambda0, self.mu0
        out = []
        for _ in range(self.n_outer):
            out.append((lam, mu))
            lam, mu = lam * self.sigma1, mu * self.sigma2
        return out


@dataclass
class SolveReport:
    model: str
    k: int
    final_centers: np.ndarray
    smoothed_cost_trace: list
    inner_iterations: list
    parameter_trace: list
    snapped_centers: tuple
    total_center: int
    snapped_cost: float
    true_cost: float
    wall_time: float
    seed: Optional[int] = None
    start_radius: Optional[float] = None
    descent_ok: list = field(default_factory=list)
    inner_objectives: Optional[list] = None

    @property
    def total_inner_iterations(self):
        return int(sum(self.inner_iterations))

    @property
    def monotone(self):
        return all(self.descent_ok)


def solve(problem, schedule, x0, tol=0.0, seed=None, keep_objectives=False, slack_rel=1e-9):
    """Run the continuation loop from ``x0`` and snap the result.

    ``problem`` is a :class:`~bilevel_dca.model_one.ModelOne` or
    :class:`~bilevel_dca.model_two.ModelTwo`; its ``lam``/``mu`` are replaced
    by the schedule. Each outer step warm-starts the DCA from the previous
    centers.
    """
    x = np.array(x0, dtype=float)
    if x.shape != (problem.n_rows, problem.data.shape[1]):
        raise DomainError(f"x0 has shape {x.shape}, expected {(problem.n_rows, problem.data.shape[1])}")

    start = time.perf_counter()
    costs, inner, params, descent = [], [], [], []
    objectives = [] if keep_objectives else None
    for outer, (lam, mu) in enumerate(schedule.parameters()):
        p = problem.with_params(lam, mu)
        try:
            trace = dca_run(p.make_oracles(), x, schedule.n_inner, tol=tol)
        except NumericalFailure as exc:
            raise NumericalFailure(exc.reason, iteration=exc.iteration, outer=outer) from exc
        x = trace.x
        costs.append(trace.objective_values[-1])
        inner.append(trace.iterations_run)
        params.append((lam, mu))
        descent.append(is_monotone(trace.objective_values, slack_rel))
        if keep_objectives:
            objectives.append(trace.objective_values)

    snapped = snap(x, problem.data, problem.k)
    true_cost = problem.with_params(params[-1][0], params[-1][1]).eval_true_objective(x)[0]
    return SolveReport(
        model=problem.model_name,
        k=problem.k,
        final_centers=x,
        smoothed_cost_trace=costs,
        inner_iterations=inner,
        parameter_trace=params,
        snapped_centers=snapped.cluster_centers,
        total_center=snapped.total_center,
        snapped_cost=snapped.cost,
        true_cost=true_cost,
        wall_time=time.perf_counter() - start,
        seed=seed,
        descent_ok=descent,
        inner_objectives=objectives,
    )


# Per-dataset schedules. The benchmark sigma1 of 7500 is read as the total
# penalty ratio over the run, not a per-step factor.
PRESETS = {
    "eil76": ContinuationSchedule(1e-6, 100.0, 1.0, 0.5, 3, 180),
    "pr1002": ContinuationSchedule.from_total_ratio(1e-6, 7500.0, 1950.0, 0.5, 3, 110),
    "ds18": ContinuationSchedule.from_total_ratio(1e-3, 7500.0, 5.7, 0.5, 4, 31),
}
