import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bilevel_dca.exceptions import DimensionError
from bilevel_dca.geometry import dist_ball, frobenius_inner, frobenius_norm, project_ball, row_norms

finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_frobenius_inner_examples():
    assert frobenius_inner(np.eye(2), np.eye(2)) == 2.0
    X = np.random.default_rng(0).normal(size=(3, 4))
    assert frobenius_inner(X, np.zeros((3, 4))) == 0.0
    # 1*5 + 2*6 + 3*7 + 4*8
    assert frobenius_inner([[1, 2], [3, 4]], [[5, 6], [7, 8]]) == 70.0


def test_frobenius_inner_shape_mismatch():
    with pytest.raises(DimensionError):
        frobenius_inner(np.zeros((2, 2)), np.zeros((2, 3)))


def test_frobenius_norm_is_trace():
    X = np.random.default_rng(1).normal(size=(4, 3))
    assert frobenius_norm(X) == pytest.approx(np.sqrt(np.trace(X.T @ X)), rel=1e-14)


def test_project_ball_examples():
    np.testing.assert_array_equal(project_ball(np.array([0.0, 0.0])), [0.0, 0.0])
    np.testing.assert_array_equal(project_ball(np.array([0.3, -0.4])), [0.3, -0.4])
    np.testing.assert_allclose(project_ball(np.array([3.0, 4.0])), [0.6, 0.8], rtol=1e-15)


def test_project_ball_keeps_boundary_points():
    v = np.array([0.6, 0.8])
    np.testing.assert_array_equal(project_ball(v), v)


def test_dist_ball_examples():
    assert dist_ball(np.array([0.5, 0.0])) == 0.0
    assert dist_ball(np.array([3.0, 4.0])) == 4.0


@given(arrays(float, st.integers(1, 5), elements=finite))
def test_dist_ball_agrees_with_projection(v):
    assert dist_ball(v) == pytest.approx(np.linalg.norm(v - project_ball(v)), abs=1e-12 * (1 + np.linalg.norm(v)))


@given(arrays(float, st.integers(1, 5), elements=finite))
def test_projection_properties(v):
    p = project_ball(v)
    assert np.linalg.norm(p) <= 1 + 1e-12
    np.testing.assert_allclose(project_ball(p), p, rtol=1e-12, atol=1e-15)


def test_row_norms_matches_linalg():
    V = np.random.default_rng(2).normal(size=(5, 3, 2))
    np.testing.assert_allclose(row_norms(V), np.linalg.norm(V, axis=-1), rtol=1e-14)
