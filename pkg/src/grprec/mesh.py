"""Uniform 1D grid, cell-average fields, interface ledger and error norms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .poly import basis_values, gauss_legendre

BOUNDARIES = ("periodic", "transmissive")
MIN_CELLS = 4


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    num_cells: int
    boundary: str = "periodic"

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.num_cells

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def interfaces(self) -> np.ndarray:
        """x_{-1/2} .. x_{M-1/2}, M+1 points."""
        return self.x_min + self.dx * np.arange(self.num_cells + 1)

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + self.dx * (np.arange(self.num_cells) + 0.5)

    def pad_cells(self, values: np.ndarray, width: int) -> np.ndarray:
        """Extend a per-cell array by ``width`` ghost cells on both sides."""
        if width == 0:
            return values
        if self.boundary == "periodic":
            left, right = values[-width:], values[:width]
        else:
            left = np.repeat(values[:1], width, axis=0)
            right = np.repeat(values[-1:], width, axis=0)
        return np.concatenate([left, values, right], axis=0)

    def pad_interfaces(self, values: np.ndarray, width: int) -> np.ndarray:
        """Extend an (M+1)-interface array by ``width`` ghost interfaces per side."""
        if width == 0:
            return values
        if self.boundary == "periodic":
            # entry 0 and entry M are the same point
            M = values.shape[0] - 1
            left = values[M - width : M]
            right = values[1 : width + 1]
        else:
            left = np.repeat(values[:1], width, axis=0)
            right = np.repeat(values[-1:], width, axis=0)
        return np.concatenate([left, values, right], axis=0)


def build_grid(x_min: float, x_max: float, M: int, boundary: str = "periodic") -> Grid:
    if not x_max > x_min:
        raise ValueError(f"need x_max > x_min, got [{x_min}, {x_max}]")
    if int(M) != M or M < MIN_CELLS:
        raise ValueError(f"need at least {MIN_CELLS} cells, got {M}")
    if boundary not in BOUNDARIES:
        raise ValueError(f"unknown boundary {boundary!r}; expected one of {BOUNDARIES}")
    return Grid(float(x_min), float(x_max), int(M), boundary)


@dataclass
class FieldState:
    averages: np.ndarray  # (M, N)
    t: float = 0.0
    step: int = 0

    @property
    def num_vars(self) -> int:
        return self.averages.shape[1]

    def copy(self) -> "FieldState":
        return FieldState(self.averages.copy(), self.t, self.step)


@dataclass
class InterfaceLedger:
    """Godunov states at every interface at the end of step ``valid_from_step``.

    ``states[j]`` lives at x_{j-1/2}; there are M+1 rows.
    """

    states: np.ndarray
    valid_from_step: int
    dt_prev: float

    def check_periodic(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.states[0] - self.states[-1]) <= atol))


def project_modal(
    grid: Grid,
    f: Callable[[np.ndarray], np.ndarray],
    degree: int,
    quad_order: int = 10,
    breakpoints: Iterable[float] = (),
) -> np.ndarray:
    """L2 projection of ``f`` onto the cell Legendre basis, shape (M, degree+1, N).

    Cells containing one of ``breakpoints`` are split there so piecewise-smooth
    functions are integrated piece by piece.
    """
    rule = gauss_legendre(quad_order)
    edges = grid.interfaces
    M = grid.num_cells
    inv_mass = (2.0 * np.arange(degree + 1) + 1.0)[:, None]
    phi = basis_values(rule.nodes, degree)  # (g, k)

    xq = edges[:-1, None] + grid.dx * rule.nodes[None, :]
    vals = _as_2d(f(xq.ravel()), xq.size).reshape(M, len(rule), -1)
    out = np.einsum("g,gk,mgn->mkn", rule.weights, phi, vals) * inv_mass

    bps = np.asarray(sorted(set(float(b) for b in breakpoints)), dtype=float)
    for i in range(M):
        a, b = edges[i], edges[i + 1]
        inside = bps[(bps > a) & (bps < b)]
        if inside.size == 0:
            continue
        pieces = np.concatenate([[a], inside, [b]])
        acc = 0.0
        for lo, hi in zip(pieces[:-1], pieces[1:]):
            x = lo + (hi - lo) * rule.nodes
            xi = (x - a) / grid.dx
            vals_i = _as_2d(f(x), len(x))
            acc = acc + (hi - lo) / grid.dx * np.einsum(
                "g,gk,gn->kn", rule.weights, basis_values(xi, degree), vals_i
            )
        out[i] = acc * inv_mass
    if not np.all(np.isfinite(out)):
        bad = int(np.argwhere(~np.isfinite(out))[0, 0])
        raise ValueError(f"initial condition is not finite in cell {bad}")
    return out


def cell_average(
    grid: Grid,
    f: Callable[[np.ndarray], np.ndarray],
    quad_order: int = 10,
    breakpoints: Iterable[float] = (),
) -> np.ndarray:
    """(1/dx) * integral of ``f`` over each cell by Gauss-Legendre, shape (M, N)."""
    return project_modal(grid, f, 0, quad_order, breakpoints)[:, 0, :]


def _as_2d(values, n: int) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        return values.reshape(n, 1)
    return values.reshape(n, -1)


def init_averages(
    grid: Grid,
    ic: Callable[[np.ndarray], np.ndarray],
    quad_order: int = 10,
    breakpoints: Sequence[float] = (),
) -> FieldState:
    return FieldState(cell_average(grid, ic, quad_order, breakpoints), t=0.0, step=0)


def error_norms(numerical, exact_averages: np.ndarray, dx: float):
    """Discrete (Linf, L1, L2) norms of the cell-average error, per component."""
    q = numerical.averages if isinstance(numerical, FieldState) else np.asarray(numerical)
    exact = np.asarray(exact_averages, dtype=float)
    if q.shape != exact.shape:
        raise ValueError(f"shape mismatch {q.shape} vs {exact.shape}")
    e = np.abs(q - exact)
    if e.ndim == 1:
        e = e[:, None]
    linf = e.max(axis=0)
    l1 = e.sum(axis=0) * dx
    l2 = np.sqrt((e**2).sum(axis=0) * dx)
    return linf, l1, l2
