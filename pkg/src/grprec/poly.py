"""Shifted Legendre basis on the reference cell [0, 1] and Gauss-Legendre rules.

A cell polynomial is stored by its modal coefficients ``c_k`` in the basis
``phi_k(xi) = P_k(2 xi - 1)``.  Mode 0 has unit mean over [0, 1] and the modes
are L2-orthogonal there, so ``c_0`` is the cell average.  Evaluation outside
[0, 1] is plain polynomial evaluation; the reconstruction uses that to talk
about neighbouring cells and far interfaces.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as npleg

MAX_GAUSS_POINTS = 10


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, f) -> float:
        """Integrate ``f`` over [0, 1]."""
        return float(np.dot(self.weights, f(self.nodes)))


@lru_cache(maxsize=None)
def _gauss_legendre_cached(n: int) -> QuadratureRule:
    x, w = npleg.leggauss(n)
    nodes = 0.5 * (x + 1.0)
    weights = 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights)


def gauss_legendre(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [0, 1] (weights sum to one)."""
    if not 1 <= n <= MAX_GAUSS_POINTS:
        raise ValueError(f"gauss_legendre supports 1..{MAX_GAUSS_POINTS} points, got {n}")
    return _gauss_legendre_cached(int(n))


def basis_values(xi, degree: int) -> np.ndarray:
    """Matrix ``V[..., k] = phi_k(xi)`` for k = 0..degree."""
    xi = np.asarray(xi, dtype=float)
    return npleg.legvander(2.0 * xi - 1.0, degree).reshape(xi.shape + (degree + 1,))


def basis_derivatives(xi, degree: int, order: int = 1) -> np.ndarray:
    """``V[..., k] = d^order phi_k / d xi^order`` evaluated at ``xi``."""
    xi = np.asarray(xi, dtype=float)
    out = np.zeros(xi.shape + (degree + 1,))
    for k in range(degree + 1):
        c = np.zeros(degree + 1)
        c[k] = 1.0
        dc = npleg.legder(c, order) * 2.0**order
        out[..., k] = npleg.legval(2.0 * xi - 1.0, dc)
    return out


def basis_means(a: float, b: float, degree: int) -> np.ndarray:
    """Row vector of the means of each basis mode over [a, b] (reference units)."""
    if b <= a:
        raise ValueError("empty averaging interval")
    out = np.zeros(degree + 1)
    for k in range(degree + 1):
        c = np.zeros(degree + 1)
        c[k] = 1.0
        # d xi = ds / 2 with s = 2 xi - 1
        anti = npleg.legint(c)
        out[k] = 0.5 * (npleg.legval(2 * b - 1, anti) - npleg.legval(2 * a - 1, anti)) / (b - a)
    return out


@lru_cache(maxsize=None)
def mass_diagonal(degree: int) -> np.ndarray:
    """``int_0^1 phi_k^2 = 1/(2k+1)``."""
    return 1.0 / (2.0 * np.arange(degree + 1) + 1.0)


def nodal_to_modal(values: np.ndarray, degree: int) -> np.ndarray:
    """Project nodal values at the (degree+1) Gauss nodes onto the modal basis.

    ``values`` has the node axis first.
    """
    rule = gauss_legendre(degree + 1)
    V = basis_values(rule.nodes, degree)
    return np.einsum("g,gk,g...->k...", rule.weights, V, values) / mass_diagonal(degree).reshape(
        (-1,) + (1,) * (values.ndim - 1)
    )


@dataclass
class ReconstructionPolynomial:
    """Degree-m polynomial on one cell, in modal form.

    ``coeffs`` has shape (m+1,) for a scalar or (m+1, N) for a system.
    """

    coeffs: np.ndarray
    dx: float = 1.0
    cell_index: int = 0
    x_left: float = field(default=0.0)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def __call__(self, xi):
        return poly_eval(self, xi)

    def at_x(self, x):
        """Evaluate at physical coordinates."""
        return poly_eval(self, (np.asarray(x, dtype=float) - self.x_left) / self.dx)


def poly_eval(p: ReconstructionPolynomial, xi):
    V = basis_values(xi, p.degree)
    return V @ p.coeffs


def poly_cell_mean(p: ReconstructionPolynomial, a: float = 0.0, b: float = 1.0):
    """Mean of ``p`` over the reference sub-interval [a, b] (may leave [0, 1])."""
    return basis_means(a, b, p.degree) @ p.coeffs


def derivative_coeffs(coeffs: np.ndarray, order: int, dx: float = 1.0) -> np.ndarray:
    """Modal coefficients of the ``order``-th physical derivative (same length)."""
    coeffs = np.asarray(coeffs, dtype=float)
    if order == 0:
        return coeffs.copy()
    m = coeffs.shape[0] - 1
    if order > m:
        return np.zeros_like(coeffs)
    d = npleg.legder(coeffs, order, axis=0) * (2.0 / dx) ** order
    out = np.zeros_like(coeffs)
    out[: d.shape[0]] = d
    return out


def poly_derivative(p: ReconstructionPolynomial, order: int) -> ReconstructionPolynomial:
    if not 0 <= order <= p.degree:
        raise ValueError(f"derivative order {order} outside 0..{p.degree}")
    return ReconstructionPolynomial(
        derivative_coeffs(p.coeffs, order, p.dx), p.dx, p.cell_index, p.x_left
    )


def lagrange_basis(nodes: np.ndarray, x) -> np.ndarray:
    """``L[..., j] = l_j(x)`` for the Lagrange polynomials through ``nodes``."""
    x = np.asarray(x, dtype=float)[..., None]
    nodes = np.asarray(nodes, dtype=float)
    n = len(nodes)
    out = np.ones(x.shape[:-1] + (n,))
    for j in range(n):
        for k in range(n):
            if k != j:
                out[..., j] *= (x[..., 0] - nodes[k]) / (nodes[j] - nodes[k])
    return out


def lagrange_derivative_matrix(nodes: np.ndarray) -> np.ndarray:
    """``D[i, j] = l_j'(nodes[i])``."""
    nodes = np.asarray(nodes, dtype=float)
    n = len(nodes)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    bary = 1.0 / np.prod(diff, axis=1)
    D = (bary[None, :] / bary[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    D[np.diag_indices(n)] = -D.sum(axis=1)
    return D
