"""Generic DCA loop over pluggable oracles.

A DC program ``f = g - h`` is described by two maps: a subgradient selection
of ``h`` and the gradient of the conjugate ``g*``. Each step takes
``Y = h_subgrad(X)`` and then ``X = g_conj_grad(Y)``; the objective values of
the iterates never increase.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .exceptions import DomainError, NumericalFailure
from .geometry import frobenius_norm

__all__ = ["DcOracles", "DcaTrace", "dca_run", "is_critical", "is_monotone"]


@dataclass(frozen=True)
class DcOracles:
    """Maps defining one DC program at fixed parameters.

    ``grad_g`` is optional; it is only needed by :func:`is_critical`.
    """

    h_subgrad: Callable[[np.ndarray], np.ndarray]
    g_conj_grad: Callable[[np.ndarray], np.ndarray]
    objective: Callable[[np.ndarray], float]
    grad_g: Optional[Callable[[np.ndarray], np.ndarray]] = None


@dataclass
class DcaTrace:
    x: np.ndarray
    objective_values: list = field(default_factory=list)
    step_norms: list = field(default_factory=list)
    iterations_run: int = 0
    stopped_early: bool = False
    iterates: Optional[list] = None


def dca_run(oracles, x0, n_inner, tol=1e-6, keep_iterates=False):
    """Run at most ``n_inner`` DCA steps from ``x0``.

    Stops early once ``|X_k - X_{k-1}|_F <= tol * (1 + |X_{k-1}|_F)``; with
    ``tol=0`` exactly ``n_inner`` steps are taken unless an iterate repeats
    bit-for-bit. ``objective_values[0]`` is the objective at ``x0``.
    """
    if n_inner < 1:
        raise DomainError("n_inner must be at least 1")
    if tol < 0:
        raise DomainError("tol must be nonnegative")
    x = np.array(x0, dtype=float)
    if not np.all(np.isfinite(x)):
        raise NumericalFailure("non-finite starting point", iteration=0)

    # overflow is detected explicitly below, so numpy's warnings are noise
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return _loop(oracles, x, n_inner, tol, keep_iterates)


def _loop(oracles, x, n_inner, tol, keep_iterates):
    trace = DcaTrace(x=x, objective_values=[float(oracles.objective(x))])
    if keep_iterates:
        trace.iterates = [x.copy()]
    for it in range(1, n_inner + 1):
        y = oracles.h_subgrad(x)
        if not np.all(np.isfinite(y)):
            raise NumericalFailure("h-subgradient oracle returned non-finite values", iteration=it)
        x_new = oracles.g_conj_grad(y)
        if not np.all(np.isfinite(x_new)):
            raise NumericalFailure("conjugate-gradient oracle returned non-finite values", iteration=it)
        step = frobenius_norm(x_new - x)
        scale = 1.0 + frobenius_norm(x)
        x = x_new
        trace.step_norms.append(step)
        trace.objective_values.append(float(oracles.objective(x)))
        trace.iterations_run = it
        if keep_iterates:
            trace.iterates.append(x.copy())
        if step <= tol * scale:
            trace.stopped_early = True
            break
    trace.x = x
    return trace


def is_critical(oracles, x, eps=1e-6):
    """Check ``grad g(x)`` against the available selection of ``dh(x)``.

    The test is sufficient, not necessary: another element of ``dh(x)`` could
    match even when the selected one does not.
    """
    if oracles.grad_g is None:
        raise DomainError("criticality check needs oracles.grad_g")
    gx = oracles.grad_g(x)
    hx = oracles.h_subgrad(x)
    return frobenius_norm(gx - hx) <= eps * (1.0 + frobenius_norm(gx))


def is_monotone(values, slack_rel=1e-9):
    """True when ``values`` never increases by more than ``slack_rel*(1+|v0|)``."""
    if len(values) < 2:
        return True
    v = np.asarray(values, dtype=float)
    slack = slack_rel * (1.0 + abs(v[0]))
    return bool(np.all(np.diff(v) <= slack))
