"""Fully discrete ADER schemes built on the DET space-time predictor.

Predictor
    Inside each cell the reconstructed polynomial is evolved by a space-time
    DG method on [0,1]^2 (reference space xi, reference time tau) using the
    tensor Lagrange basis through Gauss-Legendre nodes.  Upwinding in time at
    tau = 0 gives, after division by the diagonal spatial mass matrix,

        q = p + T [ -(dt/dx) D F(q) + dt S(q) ],    T = K_tau^{-1} diag(w),

    which is solved by Picard iteration started from q = p.  For linear
    advection the iteration operator is nilpotent and m+1 sweeps are exact.

Corrector
    FV: Q^{n+1} = Q^n - dt/dx (F_{i+1/2} - F_{i-1/2}) + dt S_i, with fluxes
    from classical Riemann problems between predictor traces at the Gauss
    time nodes.  The same interaction at tau = 1 refreshes the interface
    ledger that the GRP-based reconstructions consume at the next step.
    DG: weak-form update of every modal coefficient with the same predictor.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import InadmissibleStateError
from .mesh import FieldState, Grid, InterfaceLedger
from .models import PdeModel, max_wavespeed
from .poly import (
    ReconstructionPolynomial,
    basis_derivatives,
    basis_values,
    gauss_legendre,
    lagrange_basis,
    lagrange_derivative_matrix,
    mass_diagonal,
)
from .reconstruction import reconstruct_field

SCHEMES = ("grprec", "grprecnl", "weno-dk", "dg")
BOOTSTRAPS = ("weno-dk", "central")
PICARD_TOL = 1e-12


@dataclass(frozen=True)
class SpaceTimeOperators:
    degree: int
    nodes: np.ndarray
    weights: np.ndarray
    modal_to_nodal: np.ndarray  # (x, k)
    diff: np.ndarray  # (x, y): l_y'(xi_x)
    time_solve: np.ndarray  # (a, b)
    at_zero: np.ndarray  # Lagrange values at 0
    at_one: np.ndarray  # Lagrange values at 1
    dphi: np.ndarray  # (x, k): phi_k'(xi_x)


@lru_cache(maxsize=None)
def space_time_operators(m: int) -> SpaceTimeOperators:
    rule = gauss_legendre(m + 1)
    nodes, w = np.array(rule.nodes), np.array(rule.weights)
    D = lagrange_derivative_matrix(nodes)
    e1 = lagrange_basis(nodes, 1.0)
    # K[a, b] = l_a(1) l_b(1) - int l_a' l_b
    K = np.outer(e1, e1) - (D * w[:, None]).T
    T = np.linalg.solve(K, np.diag(w))
    return SpaceTimeOperators(
        degree=m,
        nodes=nodes,
        weights=w,
        modal_to_nodal=basis_values(nodes, m),
        diff=D,
        time_solve=T,
        at_zero=lagrange_basis(nodes, 0.0),
        at_one=e1,
        dphi=basis_derivatives(nodes, m, 1),
    )


@dataclass
class SpaceTimePredictor:
    """Nodal space-time solution on [0,1]^2, shape (..., n_tau, n_xi, N)."""

    nodal: np.ndarray
    dt: float
    degree: int
    iterations: int = 0
    residual: float = 0.0

    @property
    def ops(self) -> SpaceTimeOperators:
        return space_time_operators(self.degree)

    def evaluate(self, xi, tau):
        """Value at reference point(s) (xi, tau), shape (..., N)."""
        lx = lagrange_basis(self.ops.nodes, xi)
        lt = lagrange_basis(self.ops.nodes, tau)
        return np.einsum("...a,...x,...axn->...n", lt, lx, self.nodal)

    def time_trace(self, tau: float) -> np.ndarray:
        """Nodal spatial values at time tau, shape (..., n_xi, N)."""
        lt = lagrange_basis(self.ops.nodes, tau)
        return np.einsum("a,...axn->...xn", lt, self.nodal)

    def space_trace(self, xi: float) -> np.ndarray:
        """Values at the Gauss time nodes at position xi, shape (..., n_tau, N)."""
        lx = lagrange_basis(self.ops.nodes, xi)
        return np.einsum("x,...axn->...an", lx, self.nodal)


def _predict_nodal(model: PdeModel, coeffs: np.ndarray, dt: float, dx: float, max_iter=None, tol=PICARD_TOL):
    """Batched predictor: coeffs (M, m+1, N) -> nodal (M, n_tau, n_xi, N)."""
    m = coeffs.shape[1] - 1
    ops = space_time_operators(m)
    p = ops.modal_to_nodal @ coeffs
    # interior nodes only feed the flux, which is defined for any finite state;
    # physical admissibility is enforced where Riemann problems are solved
    _check_finite(p, "predictor initial data of cell")
    n_iter = m + 1 if max_iter is None else max_iter
    q = np.broadcast_to(p[:, None], (p.shape[0], m + 1) + p.shape[1:]).copy()
    ratio = dt / dx
    source = model.has_source
    residual = 0.0
    done = 0
    for done in range(1, n_iter + 1):
        rhs = -ratio * (ops.diff @ model.flux(q))
        if source:
            rhs += dt * model.source(q)
        # time_solve acts on the tau axis
        q_new = p[:, None] + (ops.time_solve @ rhs.reshape(rhs.shape[0], m + 1, -1)).reshape(rhs.shape)
        residual = float(np.max(np.abs(q_new - q)))
        q = q_new
        if residual < tol:
            break
    _check_finite(q, "predictor of cell")
    return q, done, residual


def _check_finite(q, where):
    bad = ~np.isfinite(q)
    if np.any(bad):
        index = tuple(int(i) for i in np.argwhere(bad)[0][:-1])
        raise InadmissibleStateError(
            f"non-finite state in {where} {index}; try a smaller CFL number", index=index, where=where
        )


def det_predictor(model: PdeModel, p: ReconstructionPolynomial, dt: float, dx: Optional[float] = None):
    """Space-time predictor for one cell seeded by the polynomial ``p``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    coeffs = np.asarray(p.coeffs, dtype=float)
    if coeffs.ndim == 1:
        coeffs = coeffs[:, None]
    q, it, res = _predict_nodal(model, coeffs[None], dt, p.dx if dx is None else dx)
    return SpaceTimePredictor(q[0], dt, coeffs.shape[0] - 1, it, res)


# --------------------------------------------------------------------------
@dataclass
class SchemeConfig:
    scheme: str
    order: int
    model: PdeModel
    grid: Grid
    cfl: float = 0.9
    bootstrap: str = "weno-dk"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.order not in (2, 3, 4, 5):
            raise ValueError(f"order must be 2..5, got {self.order}")
        if not 0 < self.cfl <= 1:
            raise ValueError(f"CFL number must be in (0, 1], got {self.cfl}")
        if self.bootstrap not in BOOTSTRAPS:
            raise ValueError(f"unknown bootstrap {self.bootstrap!r}")

    @property
    def degree(self) -> int:
        return self.order - 1

    @property
    def stability_limit(self) -> float:
        return 1.0 / (2 * self.degree + 1) if self.scheme == "dg" else 1.0


def timestep(config: SchemeConfig, state, t_end: Optional[float] = None) -> float:
    """CFL time step, clipped so the run lands exactly on ``t_end``."""
    smax = max_wavespeed(config.model, state)
    if smax <= 0:
        raise ValueError("maximum wave speed is zero; time step undefined")
    dt = config.cfl * config.stability_limit * config.grid.dx / smax
    if t_end is not None:
        remaining = t_end - state.t
        if dt >= remaining - 1e-14 * max(1.0, abs(t_end)):
            dt = remaining
    return dt


def interface_states(grid: Grid, nodal: np.ndarray, ops: SpaceTimeOperators, tau_weights=None):
    """Left/right traces at all M+1 interfaces.

    With ``tau_weights`` None the traces are taken at the Gauss time nodes,
    giving (M+1, n_tau, N); otherwise ``tau_weights`` is a Lagrange vector in
    time and the result is (M+1, N).
    """
    if tau_weights is None:
        right_face = ops.at_one @ nodal
        left_face = ops.at_zero @ nodal
    else:
        snap = tau_weights @ nodal.reshape(nodal.shape[0], nodal.shape[1], -1)
        snap = snap.reshape(nodal.shape[0], nodal.shape[2], nodal.shape[3])
        right_face = ops.at_one @ snap
        left_face = ops.at_zero @ snap
    if grid.boundary == "periodic":
        ghost_l, ghost_r = right_face[-1:], left_face[:1]
    else:
        ghost_l, ghost_r = left_face[:1], right_face[-1:]
    QL = np.concatenate([ghost_l, right_face], axis=0)
    QR = np.concatenate([left_face, ghost_r], axis=0)
    return QL, QR


def interface_quadrature(model: PdeModel, grid: Grid, predictor_nodal: np.ndarray, dt: float):
    """Time-averaged Godunov fluxes and end-of-step Godunov states, both (M+1, N)."""
    m = predictor_nodal.shape[1] - 1
    ops = space_time_operators(m)
    QL, QR = interface_states(grid, predictor_nodal, ops)
    model.check_admissible(QL, where="interface (left trace)")
    model.check_admissible(QR, where="interface (right trace)")
    flux = model.flux(model.riemann_state(QL, QR))
    flux_avg = ops.weights @ flux
    EL, ER = interface_states(grid, predictor_nodal, ops, tau_weights=ops.at_one)
    model.check_admissible(EL, where="interface (end-of-step left trace)")
    model.check_admissible(ER, where="interface (end-of-step right trace)")
    ledger_states = model.riemann_state(EL, ER)
    return flux_avg, ledger_states


def _source_average(model: PdeModel, nodal: np.ndarray, ops: SpaceTimeOperators):
    w = ops.weights
    return np.tensordot(np.outer(w, w), model.source(nodal), axes=([0, 1], [1, 2]))


def fv_step(
    config: SchemeConfig,
    state: FieldState,
    ledger: Optional[InterfaceLedger],
    dt: float,
    method: Optional[str] = None,
):
    """One ADER finite-volume step; returns (new state, new ledger).

    ``method`` overrides the reconstruction (used by the bootstrap step).
    """
    if config.scheme == "dg":
        raise ValueError("fv_step called with a DG configuration")
    model, grid, m = config.model, config.grid, config.degree
    method = method or config.scheme
    coeffs = reconstruct_field(method, m, model, state, ledger, grid)
    nodal, _, _ = _predict_nodal(model, coeffs, dt, grid.dx)
    flux, ledger_states = interface_quadrature(model, grid, nodal, dt)
    Q = state.averages - dt / grid.dx * (flux[1:] - flux[:-1])
    if model.has_source:
        Q = Q + dt * _source_average(model, nodal, space_time_operators(m))
    ok = model.admissible(Q)
    if not np.all(ok):
        bad = int(np.argwhere(~ok)[0, 0])
        raise InadmissibleStateError(
            f"inadmissible cell average in cell {bad} at t={state.t + dt:.6g}; "
            f"try a smaller CFL number (current {config.cfl})",
            index=bad,
            where="cell",
        )
    new_state = FieldState(Q, state.t + dt, state.step + 1)
    new_ledger = InterfaceLedger(ledger_states, valid_from_step=state.step, dt_prev=dt)
    return new_state, new_ledger


def bootstrap_first_step(config: SchemeConfig, state0: FieldState, dt: float):
    """First step, before any interface data exist: average-only reconstruction."""
    if state0.step != 0:
        raise ValueError("bootstrap is only defined for step 0")
    return fv_step(config, state0, None, dt, method=config.bootstrap)


# --------------------------------------------------------------------------
@dataclass
class DGState:
    coeffs: np.ndarray  # (M, m+1, N)
    t: float = 0.0
    step: int = 0

    @property
    def averages(self) -> np.ndarray:
        return self.coeffs[:, 0, :]

    def to_field(self) -> FieldState:
        return FieldState(self.averages.copy(), self.t, self.step)


def dg_step(config: SchemeConfig, dg_state: DGState, dt: float) -> DGState:
    """One fully discrete ADER-DG step."""
    if config.scheme != "dg":
        raise ValueError("dg_step called with a finite-volume configuration")
    model, grid = config.model, config.grid
    m = dg_state.coeffs.shape[1] - 1
    ops = space_time_operators(m)
    nodal, _, _ = _predict_nodal(model, dg_state.coeffs, dt, grid.dx)
    flux, _ = interface_quadrature(model, grid, nodal, dt)
    w = ops.weights
    ww = np.outer(w, w)
    test_grad = ww[:, :, None] * ops.dphi[None]  # (a, x, k)
    volume = np.tensordot(model.flux(nodal), test_grad, axes=([1, 2], [0, 1])).transpose(0, 2, 1)
    phi_r = np.ones(m + 1)
    phi_l = (-1.0) ** np.arange(m + 1)
    surface = phi_r[None, :, None] * flux[1:, None, :] - phi_l[None, :, None] * flux[:-1, None, :]
    scale = (1.0 / mass_diagonal(m))[None, :, None]
    c = dg_state.coeffs + scale * (dt / grid.dx) * (volume - surface)
    if model.has_source:
        test = ww[:, :, None] * ops.modal_to_nodal[None]
        src = np.tensordot(model.source(nodal), test, axes=([1, 2], [0, 1])).transpose(0, 2, 1)
        c = c + scale * dt * src
    ok = model.admissible(c[:, 0, :])
    if not np.all(ok):
        bad = int(np.argwhere(~ok)[0, 0])
        raise InadmissibleStateError(
            f"inadmissible DG cell mean in cell {bad} at t={dg_state.t + dt:.6g}",
            index=bad,
            where="cell",
        )
    return DGState(c, dg_state.t + dt, dg_state.step + 1)
