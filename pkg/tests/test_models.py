import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_euler_prim
from grprec.errors import InadmissibleStateError
from grprec.mesh import FieldState
from grprec.models import advection_model, char_project, char_unproject, euler_model, max_wavespeed

prim_states = st.tuples(st.floats(0.05, 20), st.floats(-5, 5), st.floats(0.05, 20))


def test_advection_flux_and_speed():
    m = advection_model(1.0)
    assert m.flux(np.array([0.5]))[0] == 0.5
    assert max_wavespeed(m, FieldState(np.linspace(-3, 3, 10)[:, None])) == 1.0
    assert advection_model(-2.0).flux(np.array([3.0]))[0] == -6.0


def test_advection_speed_must_be_finite():
    with pytest.raises(ValueError):
        advection_model(np.inf)


def test_euler_conversions_by_hand():
    e = euler_model(1.4)
    np.testing.assert_allclose(e.prim_to_cons([1, 0, 1]), [1, 0, 2.5])
    assert e.sound_speed(e.prim_to_cons([1, 0, 1])) == pytest.approx(np.sqrt(1.4))
    # E = 2/0.4 + 0.5 = 5.5, F3 = u (E + p) = 7.5
    np.testing.assert_allclose(e.flux(e.prim_to_cons([1, 1, 2])), [1, 3, 7.5])


def test_gamma_must_exceed_one():
    with pytest.raises(ValueError):
        euler_model(1.0)


def test_euler_max_wavespeed():
    e = euler_model(1.4)
    Q = np.tile(e.prim_to_cons([1, 1, 2]), (6, 1))
    assert max_wavespeed(e, FieldState(Q)) == pytest.approx(1 + np.sqrt(2.8))


def test_max_wavespeed_rejects_bad_cell():
    e = euler_model(1.4)
    Q = np.tile(e.prim_to_cons([1, 0, 1]), (6, 1))
    Q[4, 0] = -0.1
    with pytest.raises(InadmissibleStateError) as info:
        max_wavespeed(e, FieldState(Q))
    assert info.value.index == 4


def test_advection_projection_is_identity():
    m = advection_model(1.0)
    v = np.array([[0.3], [-2.0]])
    np.testing.assert_array_equal(char_project(m, v, v), v)


@given(prim_states)
def test_eigenvalues_ordered(w):
    e = euler_model(1.4)
    lam = e.eigenvalues(e.prim_to_cons(w))
    assert lam[0] <= lam[1] <= lam[2]


@given(prim_states, st.integers(0, 2))
def test_eigenvector_column_projects_to_unit_vector(w, k):
    e = euler_model(1.4)
    Q = e.prim_to_cons(w)
    R, _ = e.eigenvectors(Q)
    np.testing.assert_allclose(char_project(e, Q, R[:, k]), np.eye(3)[k], atol=1e-10)


@given(prim_states, st.lists(st.floats(-100, 100), min_size=3, max_size=3))
def test_characteristic_round_trip(w, v):
    e = euler_model(1.4)
    Q = e.prim_to_cons(w)
    v = np.array(v)
    back = char_unproject(e, Q, char_project(e, Q, v))
    np.testing.assert_allclose(back, v, atol=1e-12 * max(1.0, np.abs(v).max()) * 10)


def test_flux_jacobian_matches_eigendecomposition(rng):
    e = euler_model(1.4)
    for w in random_euler_prim(rng, 100):
        Q = e.prim_to_cons(w)
        h = 1e-6 * np.maximum(np.abs(Q), 1.0)
        J = np.stack([(e.flux(Q + h[j] * np.eye(3)[j]) - e.flux(Q - h[j] * np.eye(3)[j])) / (2 * h[j]) for j in range(3)], axis=1)
        R, L = e.eigenvectors(Q)
        A = R @ np.diag(e.eigenvalues(Q)) @ L
        assert np.linalg.norm(J - A) <= 1e-6 * np.linalg.norm(A)


@given(prim_states)
def test_prim_cons_round_trip(w):
    e = euler_model(1.4)
    np.testing.assert_allclose(e.cons_to_prim(e.prim_to_cons(w)), w, rtol=1e-13, atol=1e-13)


def test_max_wavespeed_permutation_invariant(rng):
    e = euler_model(1.4)
    Q = e.prim_to_cons(random_euler_prim(rng, 30))
    perm = rng.permutation(30)
    assert max_wavespeed(e, FieldState(Q)) == max_wavespeed(e, FieldState(Q[perm]))
