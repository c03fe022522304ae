"""Self-check suites run by ``bilevel-dca check``.

Each suite draws seeded random instances and returns a :class:`SuiteResult`.
``mutation`` names a deliberate defect (see :data:`MUTATIONS`) so that the
harness itself can be shown to catch a broken oracle.
"""

import contextlib
from dataclasses import dataclass
from typing import Optional
from unittest import mock

import numpy as np

from .continuation import ContinuationSchedule, solve
from .dataio import format_csv, parse_csv
from .geometry import frobenius_inner, frobenius_norm
from .initialization import random_start
from .model_one import ModelOne
from .model_two import ModelTwo, hessian_matrix
from .smoothing import smooth_norm

__all__ = ["SuiteResult", "SUITES", "MUTATIONS", "run_suites", "fd_gradient"]


@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: int
    worst: float
    first_failure: Optional[str] = None

    @property
    def passed(self):
        return self.failures == 0

    def summary(self):
        status = "PASS" if self.passed else "FAIL"
        line = f"{status} {self.name}: {self.cases} cases, {self.failures} failures, worst {self.worst:.3e}"
        if self.first_failure:
            line += f"; first failure: {self.first_failure}"
        return line


class _Tally:
    def __init__(self, name, tol):
        self.name, self.tol = name, tol
        self.cases = self.failures = 0
        self.worst = 0.0
        self.first = None

    def add(self, err, label):
        self.cases += 1
        self.worst = max(self.worst, float(err))
        if not err <= self.tol:
            self.failures += 1
            if self.first is None:
                self.first = f"{label} (error {err:.3e} > {self.tol:.0e})"

    def result(self):
        return SuiteResult(self.name, self.cases, self.failures, self.worst, self.first)


def fd_gradient(f, X, step=1e-6):
    """Central finite differences, step scaled by ``1 + |X|``."""
    X = np.asarray(X, dtype=float)
    h = step * (1.0 + frobenius_norm(X))
    G = np.empty_like(X)
    for idx in np.ndindex(X.shape):
        E = np.zeros_like(X)
        E[idx] = h
        G[idx] = (f(X + E) - f(X - E)) / (2.0 * h)
    return G


def _instance(rng, model):
    m = int(rng.integers(5, 12))
    n = int(rng.integers(1, 4))
    k = int(rng.integers(2, min(5, m - 1) + 1))
    lam = float(10 ** rng.uniform(-6, 1))
    mu = float(10 ** rng.uniform(-2, 2))
    A = rng.uniform(-5, 5, (m, n))
    cls = ModelOne if model == "I" else ModelTwo
    p = cls(A, k, lam, mu)
    X = rng.uniform(-6, 6, (p.n_rows, n))
    return p, X


_SMOOTH_PARTS = {
    "I": [("g1", "grad_g1"), ("g2", "grad_g2"), ("h1", "grad_h1"), ("h2", "grad_h2")],
    "II": [
        ("g1", "grad_g1"),
        ("g2", "grad_g2"),
        ("h1", "grad_h1"),
        ("h2", "grad_h2"),
        ("h3", "grad_h3"),
        ("h4", "grad_h4"),
    ],
}
_NONSMOOTH_PARTS = {"I": [("h3", "subgrad_h3"), ("h4", "subgrad_h4")], "II": [("h5", "subgrad_h5"), ("h6", "subgrad_h6")]}


def suite_gradients(n_samples=100, seed=0, tol=1e-6):
    t = _Tally("gradients", tol)
    rng = np.random.default_rng(seed)
    for model in ("I", "II"):
        for s in range(n_samples):
            p, X = _instance(rng, model)
            for comp, meth in _SMOOTH_PARTS[model]:
                G = getattr(p, meth)(X)
                F = fd_gradient(lambda Z: p.components(Z)[comp], X)
                err = frobenius_norm(F - G) / max(frobenius_norm(G), 1.0)
                t.add(err, f"model {model} {comp} sample {s}")
    return t.result()


def suite_conjugate(n_samples=100, seed=0, tol=1e-8):
    t = _Tally("conjugate", tol)
    rng = np.random.default_rng(seed)
    for model in ("I", "II"):
        for s in range(n_samples):
            p, X = _instance(rng, model)
            back = p.grad_g_conj(p.grad_g(X))
            t.add(frobenius_norm(back - X) / max(frobenius_norm(X), 1e-300), f"model {model} round trip {s}")
            if model == "II":
                R = rng.normal(size=X.shape)
                dense = np.linalg.solve(hessian_matrix(p.k, p.c1), R)
                closed = p._conj_closed_form(R)
                t.add(frobenius_norm(closed - dense) / frobenius_norm(dense), f"closed vs dense {s}")
    return t.result()


def suite_subgradients(n_samples=100, seed=0, tol=1e-9):
    t = _Tally("subgradients", tol)
    rng = np.random.default_rng(seed)
    for model in ("I", "II"):
        for s in range(n_samples):
            p, X = _instance(rng, model)
            Z = X + rng.normal(scale=10 ** rng.uniform(-3, 1), size=X.shape)
            hX, hZ = p.components(X), p.components(Z)
            for comp, meth in _NONSMOOTH_PARTS[model]:
                W = getattr(p, meth)(X)
                # violation of h(Z) >= h(X) + <W, Z - X>
                gap = hX[comp] + frobenius_inner(W, Z - X) - hZ[comp]
                t.add(max(gap, 0.0), f"model {model} {comp} pair {s}")
    return t.result()


def suite_sandwich(n_samples=1000, seed=0, tol=1e-12):
    t = _Tally("sandwich", tol)
    rng = np.random.default_rng(seed)
    for s in range(n_samples):
        n = int(rng.integers(1, 5))
        x, a = rng.normal(scale=5, size=n), rng.normal(scale=5, size=n)
        mu = float(10 ** rng.uniform(-3, 2))
        d, sm = float(np.linalg.norm(x - a)), smooth_norm(x, a, mu)
        t.add(max(sm - d, d - sm - mu / 2, 0.0), f"point sample {s}")
    for model in ("I", "II"):
        for s in range(n_samples // 10):
            p, X = _instance(rng, model)
            f = p.eval_true_objective(X)[2]
            F = p.eval_smoothed_objective(X)
            slack = 1e-12 * (1.0 + abs(f))
            err = max(F - f, f - F - p.smoothing_gap_bound(), 0.0)
            t.add(err / (1.0 + abs(f)) if err > slack else 0.0, f"model {model} objective gap {s}")
    return t.result()


def suite_descent(n_samples=10, seed=0, tol=0.0):
    t = _Tally("descent", tol)
    rng = np.random.default_rng(seed)
    schedule = ContinuationSchedule(1e-3, 5.0, 4.0, 0.5, 4, 25)
    for model in ("I", "II"):
        for s in range(n_samples):
            p, _ = _instance(rng, model)
            x0 = random_start(p.data, p.n_rows, rng=rng)
            rep = solve(p, schedule, x0, keep_objectives=True)
            worst = 0.0
            for vals in rep.inner_objectives:
                v = np.asarray(vals)
                rise = np.max(np.diff(v), initial=0.0) / (1.0 + abs(v[0]))
                worst = max(worst, rise - 1e-9)
            t.add(max(worst, 0.0), f"model {model} run {s}")
    return t.result()


def suite_roundtrip(n_samples=20, seed=0, tol=0.0):
    t = _Tally("csv-roundtrip", tol)
    rng = np.random.default_rng(seed)
    for s in range(n_samples):
        A = rng.normal(scale=10 ** rng.uniform(-3, 6), size=(int(rng.integers(1, 50)), int(rng.integers(1, 6))))
        B = parse_csv(format_csv(A))
        t.add(0.0 if np.array_equal(A, B) else 1.0, f"csv sample {s}")
    return t.result()


SUITES = {
    "gradients": suite_gradients,
    "conjugate": suite_conjugate,
    "subgradients": suite_subgradients,
    "sandwich": suite_sandwich,
    "descent": suite_descent,
    "roundtrip": suite_roundtrip,
}


def _scaled(cls, name, factor):
    orig = getattr(cls, name)
    return mock.patch.object(cls, name, lambda self, X: factor * orig(self, X))


# Injected defects for exercising the harness.
MUTATIONS = {
    "grad_g1": lambda: _scaled(ModelOne, "grad_g1", 1.001),
    "grad_h4": lambda: _scaled(ModelTwo, "grad_h4", 1.001),
    "conj": lambda: _scaled(ModelTwo, "_conj_closed_form", 1.0 + 1e-6),
    "subgrad_h3": lambda: _scaled(ModelOne, "subgrad_h3", 1.5),
}


def run_suites(names=None, seed=0, quick=False, mutation=None):
    """Run the named suites (all by default) and return their results in order."""
    names = list(names or SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    if mutation is not None and mutation not in MUTATIONS:
        raise KeyError(f"unknown mutation {mutation!r}")
    ctx = MUTATIONS[mutation]() if mutation else contextlib.nullcontext()
    out = []
    with ctx:
        for name in names:
            kwargs = {"seed": seed}
            if quick:
                kwargs["n_samples"] = 10 if name != "sandwich" else 100
            out.append(SUITES[name](**kwargs))
    return out
