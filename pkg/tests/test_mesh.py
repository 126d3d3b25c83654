import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grprec.harness import get_test_case
from grprec.mesh import FieldState, build_grid, cell_average, error_norms, init_averages, project_modal


def test_grid_spacing():
    assert build_grid(-1, 1, 100, "periodic").dx == pytest.approx(0.02)
    assert build_grid(0, 1, 40, "periodic").dx == pytest.approx(0.025)


@pytest.mark.parametrize("M", [3, 0, -2])
def test_grid_needs_four_cells(M):
    with pytest.raises(ValueError):
        build_grid(0, 1, M, "periodic")


def test_grid_rejects_empty_interval_and_unknown_boundary():
    with pytest.raises(ValueError):
        build_grid(1, 1, 10)
    with pytest.raises(ValueError):
        build_grid(0, 1, 10, "reflective")


def test_grid_tiles_interval():
    g = build_grid(-1, 1, 7)
    assert g.interfaces[0] == -1 and g.interfaces[-1] == pytest.approx(1)
    np.testing.assert_allclose(np.diff(g.interfaces), g.dx)
    np.testing.assert_allclose(g.centers, 0.5 * (g.interfaces[1:] + g.interfaces[:-1]), atol=1e-15)


def test_periodic_padding_wraps():
    g = build_grid(0, 1, 5)
    v = np.arange(5.0)[:, None]
    np.testing.assert_array_equal(g.pad_cells(v, 2)[:, 0], [3, 4, 0, 1, 2, 3, 4, 0, 1])
    faces = np.arange(6.0)[:, None]
    faces[-1] = faces[0]
    np.testing.assert_array_equal(g.pad_interfaces(faces, 1)[:, 0], [4, 0, 1, 2, 3, 4, 0, 1])


def test_transmissive_padding_repeats_edges():
    g = build_grid(0, 1, 4, "transmissive")
    v = np.arange(4.0)[:, None]
    np.testing.assert_array_equal(g.pad_cells(v, 2)[:, 0], [0, 0, 0, 1, 2, 3, 3, 3])


def test_constant_initial_data():
    g = build_grid(0, 1, 8)
    state = init_averages(g, lambda x: np.full_like(x, 3.25))
    np.testing.assert_allclose(state.averages, 3.25, rtol=1e-15)


def test_quartic_sine_averages_against_exact_integral():
    # int sin^4(pi x) = 3x/8 - sin(2 pi x)/(4 pi) + sin(4 pi x)/(32 pi)
    g = build_grid(-1, 1, 16)
    F = lambda x: 3 * x / 8 - np.sin(2 * np.pi * x) / (4 * np.pi) + np.sin(4 * np.pi * x) / (32 * np.pi)
    exact = (F(g.interfaces[1:]) - F(g.interfaces[:-1])) / g.dx
    got = cell_average(g, lambda x: np.sin(np.pi * x) ** 4)[:, 0]
    np.testing.assert_allclose(got, exact, atol=1e-12)


def test_square_wave_averages_are_overlap_fractions():
    g = build_grid(-1, 1, 7)
    case = get_test_case("square-wave")
    got = cell_average(g, case.ic, breakpoints=case.breakpoints(0.0))[:, 0]
    lo, hi = g.interfaces[:-1], g.interfaces[1:]
    overlap = np.clip(np.minimum(hi, 0.3) - np.maximum(lo, -0.3), 0, None) / g.dx
    np.testing.assert_allclose(got, overlap, atol=1e-14)
    assert np.any((got > 0) & (got < 1))


def test_modal_projection_of_polynomial_is_exact():
    g = build_grid(0, 2, 5)
    f = lambda x: 1 + x - 2 * x**2 + 0.5 * x**3
    c = project_modal(g, f, 3)
    from grprec.poly import basis_values

    xi = np.linspace(0, 1, 5)
    for i in range(5):
        x = g.interfaces[i] + g.dx * xi
        np.testing.assert_allclose(basis_values(xi, 3) @ c[i, :, 0], f(x), atol=1e-12)


def test_non_finite_initial_data_rejected():
    g = build_grid(0, 1, 8)
    with pytest.raises(ValueError):
        init_averages(g, lambda x: np.where(x > 0.5, np.nan, 1.0))


def test_error_norms_examples():
    exact = np.zeros((10, 1))
    num = exact.copy()
    assert [float(v[0]) for v in error_norms(FieldState(num), exact, 0.1)] == [0, 0, 0]
    num[3] = 1.0
    linf, l1, l2 = error_norms(FieldState(num), exact, 0.1)
    assert linf[0] == 1.0
    assert l1[0] == pytest.approx(0.1)
    assert l2[0] == pytest.approx(np.sqrt(0.1))


def test_error_norms_shape_mismatch():
    with pytest.raises(ValueError):
        error_norms(np.zeros((4, 1)), np.zeros((5, 1)), 0.1)


@given(st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=40), st.floats(0.5, 5.0))
def test_norm_ordering(errs, length):
    e = np.array(errs)[:, None]
    dx = length / len(errs)
    linf, l1, l2 = error_norms(e, np.zeros_like(e), dx)
    tol = 1e-12 * (1 + linf[0])
    assert l1[0] / length <= l2[0] / np.sqrt(length) + tol
    assert l2[0] / np.sqrt(length) <= linf[0] + tol
