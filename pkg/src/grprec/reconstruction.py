"""GRP-based reconstruction (linear and WENO-weighted) and the WENO-DK baseline.

Every reconstruction here is built from two kinds of linear conditions on the
cell-i polynomial p(xi), xi in reference units of cell i:

* conservation on cell i+j:  mean of p over [j, j+1] equals q_{i+j};
* interpolation at interface i-1/2+s:  p(s) equals the ledger knot there.

Because the grid is uniform, each reconstruction operator is a fixed matrix
mapping the stencil data to modal coefficients.  They are assembled once per
degree and cached.

Stencil data for the GRP-based operators is the 7-vector
``(q_{i-1}, q_i, q_{i+1}, k_{i-3/2}, k_{i-1/2}, k_{i+1/2}, k_{i+3/2})``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import StaleLedgerError
from .poly import ReconstructionPolynomial, basis_derivatives, basis_means, basis_values, gauss_legendre

LAMBDA_SIDE = 1.0
LAMBDA_CENTRAL = 1e9
WENO_POWER = 4
WENO_EPS = 1e-14

METHODS = ("grprec", "grprecnl", "weno-dk", "central")
DEGREES = (1, 2, 3, 4)

_AVG_SLOT = {-1: 0, 0: 1, 1: 2}
_KNOT_SLOT = {-1: 3, 0: 4, 1: 5, 2: 6}
N_GRP_DATA = 7


def _avg(j):
    return ("avg", j)


def _knot(s):
    return ("knot", s)


# condition sets per degree --------------------------------------------------
# central GRPrec: (least-squares conditions, hard constraints)
GRPREC_CONDITIONS = {
    1: ([_knot(0), _knot(1)], [_avg(0)]),
    2: ([], [_avg(0), _knot(0), _knot(1)]),
    3: ([_avg(-1), _avg(1), _knot(0), _knot(1)], [_avg(0)]),
    4: ([], [_avg(-1), _avg(0), _avg(1), _knot(0), _knot(1)]),
}

# one-sided candidates of GRPrecNL: (left, right), all conditions exact
GRPRECNL_SIDES = {
    1: ([_avg(0), _knot(0)], [_avg(0), _knot(1)]),
    2: ([_avg(-1), _avg(0), _knot(1)], [_avg(0), _avg(1), _knot(0)]),
    3: ([_avg(-1), _avg(0), _avg(1), _knot(0)], [_avg(-1), _avg(0), _avg(1), _knot(1)]),
    4: (
        [_avg(-1), _avg(0), _avg(1), _knot(0), _knot(-1)],
        [_avg(-1), _avg(0), _avg(1), _knot(1), _knot(2)],
    ),
}


def _condition_row(m: int, cond, slots: dict, n_data: int):
    kind, where = cond
    row_e = np.zeros(n_data)
    if kind == "avg":
        row_c = basis_means(where, where + 1, m)
        row_e[slots["avg"][where]] = 1.0
    else:
        row_c = basis_values(float(where), m)
        row_e[slots["knot"][where]] = 1.0
    return row_c, row_e


def _assemble(m: int, conds, slots, n_data):
    if not conds:
        return np.zeros((0, m + 1)), np.zeros((0, n_data))
    rows = [_condition_row(m, c, slots, n_data) for c in conds]
    return np.array([r[0] for r in rows]), np.array([r[1] for r in rows])


def _solve_operator(m, ls_conds, hard_conds, slots, n_data):
    """Matrix A with coeffs = A @ data.

    Hard conditions hold exactly; the squared residuals of the least-squares
    conditions are minimised subject to them (KKT system, Lagrange multipliers).
    """
    C, Ec = _assemble(m, hard_conds, slots, n_data)
    if not ls_conds:
        if C.shape[0] != m + 1:
            raise ValueError(f"degree {m} needs {m + 1} exact conditions, got {C.shape[0]}")
        A = np.linalg.solve(C, Ec)
    else:
        B, Eb = _assemble(m, ls_conds, slots, n_data)
        nc = C.shape[0]
        K = np.zeros((m + 1 + nc, m + 1 + nc))
        K[: m + 1, : m + 1] = 2.0 * B.T @ B
        K[: m + 1, m + 1 :] = C.T
        K[m + 1 :, : m + 1] = C
        rhs = np.vstack([2.0 * B.T @ Eb, Ec])
        A = np.linalg.solve(K, rhs)[: m + 1]
    if not np.all(np.isfinite(A)):
        raise np.linalg.LinAlgError("singular reconstruction system")
    return A


_GRP_SLOTS = {"avg": _AVG_SLOT, "knot": _KNOT_SLOT}


@lru_cache(maxsize=None)
def grprec_operator(m: int) -> np.ndarray:
    """(m+1, 7) matrix of the central GRPrec reconstruction."""
    _check_degree(m)
    ls, hard = GRPREC_CONDITIONS[m]
    A = _solve_operator(m, ls, hard, _GRP_SLOTS, N_GRP_DATA)
    A.setflags(write=False)
    return A


@lru_cache(maxsize=None)
def grprecnl_operators(m: int) -> np.ndarray:
    """(3, m+1, 7): left, central, right candidate operators."""
    _check_degree(m)
    left, right = GRPRECNL_SIDES[m]
    ops = np.stack(
        [
            _solve_operator(m, [], left, _GRP_SLOTS, N_GRP_DATA),
            grprec_operator(m),
            _solve_operator(m, [], right, _GRP_SLOTS, N_GRP_DATA),
        ]
    )
    ops.setflags(write=False)
    return ops


def weno_dk_stencils(m: int):
    """Cell offsets of the left, central and right stencils."""
    c_lo = -((m + 1) // 2)
    return (
        list(range(-m, 1)),
        list(range(c_lo, c_lo + m + 1)),
        list(range(0, m + 1)),
    )


@lru_cache(maxsize=None)
def weno_dk_operators(m: int) -> np.ndarray:
    """(3, m+1, 2m+1) operators on the averages q_{i-m} .. q_{i+m}."""
    _check_degree(m)
    slots = {"avg": {j: j + m for j in range(-m, m + 1)}, "knot": {}}
    ops = np.stack(
        [_solve_operator(m, [], [_avg(j) for j in st], slots, 2 * m + 1) for st in weno_dk_stencils(m)]
    )
    ops.setflags(write=False)
    return ops


@lru_cache(maxsize=None)
def oi_matrix(m: int) -> np.ndarray:
    """Quadratic form G with OI = dx * c^T G c (reference coordinates)."""
    rule = gauss_legendre(m + 1)
    G = np.zeros((m + 1, m + 1))
    for order in range(1, m + 1):
        d = basis_derivatives(rule.nodes, m, order)
        G += d.T @ (rule.weights[:, None] * d)
    G.setflags(write=False)
    return G


def _check_degree(m):
    if m not in DEGREES:
        raise ValueError(f"degree must be one of {DEGREES}, got {m}")


# nonlinear weights -----------------------------------------------------------
@dataclass(frozen=True)
class NonlinearWeights:
    lambdas: tuple = (LAMBDA_SIDE, LAMBDA_CENTRAL, LAMBDA_SIDE)
    r: int = WENO_POWER
    epsilon: float = WENO_EPS

    def __call__(self, oi: np.ndarray) -> np.ndarray:
        """Normalised weights; candidates along axis 0 of ``oi``."""
        oi = np.asarray(oi, dtype=float)
        lam = np.asarray(self.lambdas).reshape((3,) + (1,) * (oi.ndim - 1))
        omega = lam / (self.epsilon + oi) ** self.r
        return omega / omega.sum(axis=0, keepdims=True)


DEFAULT_WEIGHTS = NonlinearWeights()


def oscillation_indicator(p: ReconstructionPolynomial):
    """sum_l int_cell (d^l p/dx^l)^2 dx^{2l} dx."""
    if p.degree < 1:
        raise ValueError("oscillation indicator needs degree >= 1")
    c = p.coeffs
    G = oi_matrix(p.degree)
    return p.dx * np.einsum("k...,kl,l...->...", c, G, c)


# single-cell reconstructions ----------------------------------------------------
@dataclass
class KnotSet:
    """Interface values from the previous step around cell i."""

    left: object
    right: object
    far_left: Optional[object] = None
    far_right: Optional[object] = None

    def as_array(self):
        left = np.asarray(self.left, dtype=float)
        zero = np.zeros_like(left)
        fl = zero if self.far_left is None else np.asarray(self.far_left, dtype=float)
        fr = zero if self.far_right is None else np.asarray(self.far_right, dtype=float)
        return np.stack([fl, left, np.asarray(self.right, dtype=float), fr])


def _knots(knots) -> KnotSet:
    if isinstance(knots, KnotSet):
        return knots
    knots = list(knots)
    if len(knots) == 2:
        return KnotSet(knots[0], knots[1])
    if len(knots) == 4:
        return KnotSet(knots[1], knots[2], knots[0], knots[3])
    raise ValueError("knots must be (left, right) or (far_left, left, right, far_right)")


def _grp_data(averages, knots) -> np.ndarray:
    averages = np.asarray(averages, dtype=float)[:3]
    if averages.shape[0] != 3:
        raise ValueError("need the averages q_{i-1}, q_i, q_{i+1}")
    return np.concatenate([averages, _knots(knots).as_array()], axis=0)


def grprec(m: int, averages: Sequence, knots, dx: float = 1.0) -> ReconstructionPolynomial:
    """Central GRPrec polynomial of degree ``m`` for one cell."""
    data = _grp_data(averages, knots)
    coeffs = np.tensordot(grprec_operator(m), data, axes=(1, 0))
    return ReconstructionPolynomial(coeffs, dx)


def combine_candidates(cands: np.ndarray, dx: float, weights: NonlinearWeights = DEFAULT_WEIGHTS):
    """Convex combination of (3, m+1, ...) candidates by their oscillation indicators."""
    m = cands.shape[1] - 1
    oi = dx * np.einsum("ck...,kl,cl...->c...", cands, oi_matrix(m), cands, optimize=True)
    beta = weights(oi)
    return np.einsum("c...,ck...->k...", beta, cands), beta, oi


def grprec_candidates(m: int, averages, knots) -> np.ndarray:
    ks = _knots(knots)
    if m == 4 and (ks.far_left is None or ks.far_right is None):
        raise ValueError("degree-4 one-sided candidates need the knots at i-3/2 and i+3/2")
    data = _grp_data(averages, ks)
    return np.tensordot(grprecnl_operators(m), data, axes=(2, 0))


def grprec_nl(m: int, averages: Sequence, knots, dx: float = 1.0) -> ReconstructionPolynomial:
    """WENO-weighted GRPrec: left/central/right candidates mixed by smoothness."""
    cands = grprec_candidates(m, averages, knots)
    coeffs, _, _ = combine_candidates(cands, dx)
    return ReconstructionPolynomial(coeffs, dx)


def weno_dk(m: int, averages: Sequence, dx: float = 1.0) -> ReconstructionPolynomial:
    """Cell-average WENO with one-sided and central stencils; ``averages`` is q_{i-m}..q_{i+m}."""
    averages = np.asarray(averages, dtype=float)
    if averages.shape[0] != 2 * m + 1:
        raise ValueError(f"WENO-DK of degree {m} needs {2 * m + 1} averages")
    cands = np.tensordot(weno_dk_operators(m), averages, axes=(2, 0))
    coeffs, _, _ = combine_candidates(cands, dx)
    return ReconstructionPolynomial(coeffs, dx)


# whole-field reconstruction ----------------------------------------------------------
def stencil_width(method: str, m: int) -> int:
    return m if method in ("weno-dk", "central") else 1


def _gather(padded: np.ndarray, width: int, count: int, M: int) -> np.ndarray:
    """(M, count, N) array whose row i holds padded[i : i + count]."""
    return np.stack([padded[k : k + M] for k in range(count)], axis=1)


def grp_stencil_data(grid, averages: np.ndarray, knots: np.ndarray) -> np.ndarray:
    """(M, 7, N) GRP stencil data for every cell."""
    M = grid.num_cells
    A = _gather(grid.pad_cells(averages, 1), 1, 3, M)
    K = _gather(grid.pad_interfaces(knots, 1), 1, 4, M)
    return np.concatenate([A, K], axis=1)


def reconstruct_field(method: str, m: int, model, state, ledger=None, grid=None) -> np.ndarray:
    """Modal coefficients (M, m+1, N) of the reconstruction in every cell.

    Nonlinear methods work in the characteristic variables of each cell's own
    average.  For the linear operators the projection commutes with the
    operator and is skipped.
    """
    if grid is None:
        raise ValueError("reconstruct_field needs the grid")
    if method not in METHODS:
        raise ValueError(f"unknown reconstruction {method!r}; expected one of {METHODS}")
    _check_degree(m)
    Q = state.averages
    M = grid.num_cells

    if method in ("grprec", "grprecnl"):
        if ledger is None:
            raise StaleLedgerError("GRP-based reconstruction needs an interface ledger")
        if ledger.valid_from_step + 1 != state.step:
            raise StaleLedgerError(
                f"ledger from step {ledger.valid_from_step} used at step {state.step}"
            )
        data = grp_stencil_data(grid, Q, ledger.states)
    else:
        data = _gather(grid.pad_cells(Q, m), m, 2 * m + 1, M)

    if method == "grprec":
        return grprec_operator(m) @ data
    if method == "central":
        return weno_dk_operators(m)[1] @ data

    ops = grprecnl_operators(m) if method == "grprecnl" else weno_dk_operators(m)
    char = model.num_vars > 1
    if char:
        R, L = model.eigenvectors(Q)
        data = data @ L.transpose(0, 2, 1)
    cands = np.einsum("ckd,idn->ckin", ops, data, optimize=True)
    coeffs, _, _ = combine_candidates(cands, grid.dx)
    coeffs = coeffs.transpose(1, 0, 2)
    if char:
        coeffs = coeffs @ R.transpose(0, 2, 1)
    return coeffs
