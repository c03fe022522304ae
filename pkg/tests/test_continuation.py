import numpy as np
import pytest

from bilevel_dca.continuation import PRESETS, ContinuationSchedule, derive_sigmas, solve
from bilevel_dca.dataio import load_dataset
from bilevel_dca.dca import DcOracles
from bilevel_dca.exceptions import ConfigError, DomainError, NumericalFailure
from bilevel_dca.initialization import random_start
from bilevel_dca.model_one import ModelOne
from bilevel_dca.model_two import ModelTwo
from bilevel_dca.postprocess import discrete_optimum


class TestSigmas:
    def test_equal_bounds_give_unit_factor(self):
        assert derive_sigmas(1e-3, 1e-3, 10.0, 1.0, 5)[0] == 1.0

    def test_inverts_halving(self):
        assert derive_sigmas(1e-6, 1e-6, 100.0, 100 * 0.5**10, 10)[1] == pytest.approx(0.5, rel=1e-14)

    def test_round_trip(self):
        lam0, lmax, n = 1e-6, 7.5e-3, 7
        s1, _ = derive_sigmas(lam0, lmax, 1950.0, 1.0, n)
        assert s1**n * lam0 == pytest.approx(lmax, rel=1e-9)

    def test_bad_bounds(self):
        for args in ((1.0, 0.5, 1.0, 1.0, 3), (1.0, 2.0, 1.0, 2.0, 3), (0.0, 1.0, 1.0, 1.0, 3), (1.0, 1.0, 1.0, 1.0, 0)):
            with pytest.raises(DomainError):
                derive_sigmas(*args)


class TestSchedule:
    def test_parameters(self):
        s = ContinuationSchedule(1e-3, 8.0, 2.0, 0.5, 3, 10)
        assert s.parameters() == [(1e-3, 8.0), (2e-3, 4.0), (4e-3, 2.0)]
        assert s.lambda_max == pytest.approx(8e-3) and s.mu_min == pytest.approx(1.0)

    def test_from_bounds_matches_explicit(self):
        s = ContinuationSchedule.from_bounds(1e-6, 1e-6 * 2.0**4, 100.0, 100.0 * 0.5**4, 4, 20)
        t = ContinuationSchedule(1e-6, 100.0, 2.0, 0.5, 4, 20)
        np.testing.assert_allclose(s.parameters(), t.parameters(), rtol=1e-12)

    def test_from_total_ratio(self):
        s = ContinuationSchedule.from_total_ratio(1e-3, 7500.0, 5.7, 0.5, 4, 31)
        assert s.lambda_max == pytest.approx(7.5, rel=1e-12)
        assert PRESETS["ds18"] == s

    def test_invalid(self):
        for kw in ({"lambda0": 0}, {"mu0": -1}, {"sigma1": 0.9}, {"sigma2": 1.5}, {"sigma2": 0}, {"n_outer": 0}, {"n_inner": 0}):
            with pytest.raises(ConfigError):
                ContinuationSchedule(**kw)

    def test_presets_total_iterations(self):
        assert {k: v.n_outer * v.n_inner for k, v in PRESETS.items()} == {"eil76": 540, "pr1002": 330, "ds18": 124}


def test_single_outer_step_runs_one_dca():
    A = load_dataset("ds18")
    p = ModelOne(A, 2, 0.0, 1.0)
    rep = solve(p, ContinuationSchedule(1e-3, 5.0, 2.0, 0.5, 1, 15), random_start(A, 2))
    assert len(rep.inner_iterations) == 1 and rep.total_inner_iterations == 15
    assert rep.parameter_trace == [(1e-3, 5.0)]


def _cluster_medians(A, labels):
    out = set()
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        sums = [sum(np.linalg.norm(A[i] - A[j]) for j in idx) for i in idx]
        out.add(int(idx[int(np.argmin(sums))]))
    return out


@pytest.mark.parametrize("cls", [ModelOne, ModelTwo])
def test_two_clusters_recover_cluster_medians(cls):
    A = load_dataset("ds18")
    p = cls(A, 2, 0.0, 1.0)
    rep = solve(p, PRESETS["ds18"], random_start(A, p.n_rows))
    assert set(rep.snapped_centers) == _cluster_medians(A, A[:, 0] > 8)
    assert rep.monotone


def test_report_fields():
    A = load_dataset("ds18")
    p = ModelTwo(A, 2, 0.0, 1.0)
    rep = solve(p, ContinuationSchedule(1e-3, 5.0, 2.0, 0.5, 3, 10), random_start(A, 3), seed=4, keep_objectives=True)
    assert rep.model == "II" and rep.k == 2 and rep.seed == 4
    assert rep.final_centers.shape == (3, 2)
    assert len(rep.smoothed_cost_trace) == len(rep.inner_objectives) == 3
    assert all(len(v) == 11 for v in rep.inner_objectives)
    assert rep.wall_time > 0
    assert rep.snapped_cost >= discrete_optimum(A, 2)[0] - 1e-12


def test_bad_start_shape():
    p = ModelOne(load_dataset("ds18"), 2, 0.0, 1.0)
    with pytest.raises(DomainError):
        solve(p, ContinuationSchedule(), np.zeros((3, 2)))


class _Exploding:
    """Problem stand-in whose oracles blow up on the second outer step."""

    model_name, k, n_rows = "I", 2, 2
    data = np.zeros((4, 2))

    def __init__(self, mu=1.0):
        self.mu = mu

    def with_params(self, lam, mu):
        return _Exploding(mu)

    def make_oracles(self):
        bad = self.mu < 1.0
        return DcOracles(
            h_subgrad=lambda x: x * (np.inf if bad else 1.0),
            g_conj_grad=lambda y: y,
            objective=lambda x: 0.0,
        )


def test_numerical_failure_names_outer_step():
    with pytest.raises(NumericalFailure) as info:
        solve(_Exploding(), ContinuationSchedule(1e-3, 1.0, 1.0, 0.5, 3, 4), np.ones((2, 2)))
    assert info.value.outer == 1 and info.value.iteration == 1
    assert "outer 1, inner 1" in str(info.value)
