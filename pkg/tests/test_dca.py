import numpy as np
import pytest

from bilevel_dca.dca import DcOracles, dca_run, is_critical, is_monotone
from bilevel_dca.exceptions import DomainError, NumericalFailure
from bilevel_dca.model_one import ModelOne


def linear_toy(c):
    # g = |x|^2/2 so grad g* is the identity; h = <c, x>
    return DcOracles(
        h_subgrad=lambda x: c.copy(),
        g_conj_grad=lambda y: y,
        objective=lambda x: 0.5 * float(np.sum(x * x)) - float(np.sum(c * x)),
        grad_g=lambda x: x,
    )


def test_linear_toy_converges_in_one_step():
    c = np.array([[1.0, -2.0], [0.5, 3.0]])
    trace = dca_run(linear_toy(c), np.zeros((2, 2)), n_inner=10, tol=1e-12)
    np.testing.assert_array_equal(trace.x, c)
    # the second step lands on the same point and triggers the stop rule
    assert trace.iterations_run == 2 and trace.stopped_early


def test_fixed_point_start_stops_after_one_step():
    c = np.array([[1.0, 2.0]])
    trace = dca_run(linear_toy(c), c.copy(), n_inner=10, tol=1e-9)
    assert trace.iterations_run == 1
    assert trace.step_norms[0] <= 1e-9


def test_model_one_trace_is_monotone():
    A = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [5.0, 5.0]])
    p = ModelOne(A, 2, 0.1, 0.5)
    trace = dca_run(p.make_oracles(), np.array([[0.3, 0.2], [2.0, 2.0]]), n_inner=50, tol=0)
    v = np.array(trace.objective_values)
    assert len(v) == 51
    assert np.all(np.diff(v) <= 1e-12 * (1 + abs(v[0])))


def test_is_critical_at_dca_fixed_point():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(8, 2))
    p = ModelOne(A, 2, 0.5, 1.0)
    trace = dca_run(p.make_oracles(), rng.normal(size=(2, 2)), n_inner=5000, tol=1e-14)
    assert is_critical(p.make_oracles(), trace.x, 1e-6)


def test_is_critical_false_far_away():
    rng = np.random.default_rng(1)
    p = ModelOne(rng.normal(size=(8, 2)), 3, 0.5, 1.0)
    assert not is_critical(p.make_oracles(), 50 + rng.normal(size=(3, 2)), 1e-6)


def test_is_critical_when_f_is_zero():
    orc = DcOracles(h_subgrad=lambda x: 2 * x, g_conj_grad=lambda y: y / 2, objective=lambda x: 0.0, grad_g=lambda x: 2 * x)
    for x in np.random.default_rng(2).normal(size=(5, 3, 2)):
        assert is_critical(orc, x, 1e-6)


def test_is_critical_requires_grad_g():
    orc = DcOracles(h_subgrad=lambda x: x, g_conj_grad=lambda y: y, objective=lambda x: 0.0)
    with pytest.raises(DomainError):
        is_critical(orc, np.zeros((1, 1)))


def test_non_finite_oracle_reports_iteration():
    orc = DcOracles(h_subgrad=lambda x: x * np.inf, g_conj_grad=lambda y: y, objective=lambda x: 0.0)
    with pytest.raises(NumericalFailure) as info:
        dca_run(orc, np.ones((1, 2)), 5)
    assert info.value.iteration == 1


def test_argument_validation():
    orc = linear_toy(np.zeros((1, 1)))
    with pytest.raises(DomainError):
        dca_run(orc, np.zeros((1, 1)), 0)
    with pytest.raises(DomainError):
        dca_run(orc, np.zeros((1, 1)), 1, tol=-1)


def test_tol_zero_runs_all_steps_and_keeps_iterates():
    p = ModelOne(np.random.default_rng(3).normal(size=(6, 2)), 2, 0.1, 1.0)
    trace = dca_run(p.make_oracles(), np.ones((2, 2)), 7, tol=0, keep_iterates=True)
    assert trace.iterations_run == 7 and len(trace.iterates) == 8


def test_is_monotone():
    assert is_monotone([3.0, 2.0, 2.0, 1.0])
    assert not is_monotone([1.0, 1.1])
    assert is_monotone([1.0, 1.0 + 1e-10])
    assert is_monotone([5.0])
