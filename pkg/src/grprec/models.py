"""PDE models: scalar linear advection and the ideal-gas Euler equations.

All methods act on conservative states with the variable axis last, so any
leading batch shape (cells, nodes, ...) works.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InadmissibleStateError
from .riemann import advection_rp, trrs_state


class PdeModel:
    """Balance law q_t + F(q)_x = S(q)."""

    num_vars: int = 1
    name: str = "model"
    has_source: bool = False

    def flux(self, Q):
        raise NotImplementedError

    def source(self, Q):
        return np.zeros_like(np.asarray(Q, dtype=float))

    def eigenvalues(self, Q):
        raise NotImplementedError

    def eigenvectors(self, Q):
        """Right and left eigenvector matrices R, R^{-1}, shape (..., N, N)."""
        raise NotImplementedError

    def admissible(self, Q):
        Q = np.asarray(Q, dtype=float)
        return np.all(np.isfinite(Q), axis=-1)

    def riemann_state(self, QL, QR):
        raise NotImplementedError

    def check_admissible(self, Q, where: str = "cell"):
        ok = self.admissible(Q)
        if not np.all(ok):
            idx = np.argwhere(~np.asarray(ok))[0]
            index = tuple(int(i) for i in idx)
            if len(index) == 1:
                index = index[0]
            raise InadmissibleStateError(
                f"inadmissible state in {where} {index}; try a smaller CFL number",
                index=index,
                where=where,
            )


@dataclass
class LinearAdvection(PdeModel):
    speed: float = 1.0
    # S(q) = -decay * q; zero for every test of the paper
    decay: float = 0.0

    num_vars = 1
    name = "advection"

    @property
    def has_source(self) -> bool:
        return self.decay != 0.0

    def flux(self, Q):
        return self.speed * np.asarray(Q, dtype=float)

    def source(self, Q):
        return -self.decay * np.asarray(Q, dtype=float)

    def eigenvalues(self, Q):
        Q = np.asarray(Q, dtype=float)
        return np.full(Q.shape, self.speed)

    def eigenvectors(self, Q):
        Q = np.asarray(Q, dtype=float)
        eye = np.ones(Q.shape[:-1] + (1, 1))
        return eye, eye.copy()

    def riemann_state(self, QL, QR):
        return advection_rp(self.speed, QL, QR)


@dataclass
class Euler(PdeModel):
    gamma: float = 1.4

    num_vars = 3
    name = "euler"

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")

    # variable conversions ---------------------------------------------------
    def prim_to_cons(self, W):
        W = np.asarray(W, dtype=float)
        rho, u, p = W[..., 0], W[..., 1], W[..., 2]
        E = p / (self.gamma - 1.0) + 0.5 * rho * u * u
        return np.stack([rho, rho * u, E], axis=-1)

    def cons_to_prim(self, Q):
        Q = np.asarray(Q, dtype=float)
        rho, mom, E = Q[..., 0], Q[..., 1], Q[..., 2]
        u = mom / rho
        p = (self.gamma - 1.0) * (E - 0.5 * mom * u)
        return np.stack([rho, u, p], axis=-1)

    def pressure(self, Q):
        Q = np.asarray(Q, dtype=float)
        return (self.gamma - 1.0) * (Q[..., 2] - 0.5 * Q[..., 1] ** 2 / Q[..., 0])

    def sound_speed(self, Q):
        Q = np.asarray(Q, dtype=float)
        return np.sqrt(self.gamma * self.pressure(Q) / Q[..., 0])

    # model interface --------------------------------------------------------
    def admissible(self, Q):
        Q = np.asarray(Q, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            p = self.pressure(Q)
        return np.all(np.isfinite(Q), axis=-1) & (Q[..., 0] > 0) & (p > 0)

    def flux(self, Q):
        Q = np.asarray(Q, dtype=float)
        rho, mom, E = Q[..., 0], Q[..., 1], Q[..., 2]
        u = mom / rho
        p = (self.gamma - 1.0) * (E - 0.5 * mom * u)
        return np.stack([mom, mom * u + p, u * (E + p)], axis=-1)

    def eigenvalues(self, Q):
        Q = np.asarray(Q, dtype=float)
        u = Q[..., 1] / Q[..., 0]
        a = self.sound_speed(Q)
        return np.stack([u - a, u, u + a], axis=-1)

    def eigenvectors(self, Q):
        Q = np.asarray(Q, dtype=float)
        g = self.gamma
        rho = Q[..., 0]
        u = Q[..., 1] / rho
        p = (g - 1.0) * (Q[..., 2] - 0.5 * rho * u * u)
        a = np.sqrt(g * p / rho)
        H = (Q[..., 2] + p) / rho
        one = np.ones_like(u)
        R = np.stack(
            [
                np.stack([one, one, one], axis=-1),
                np.stack([u - a, u, u + a], axis=-1),
                np.stack([H - u * a, 0.5 * u * u, H + u * a], axis=-1),
            ],
            axis=-2,
        )
        b1 = (g - 1.0) / (a * a)
        b2 = 0.5 * b1 * u * u
        L = np.stack(
            [
                np.stack([0.5 * (b2 + u / a), -0.5 * (b1 * u + 1.0 / a), 0.5 * b1], axis=-1),
                np.stack([1.0 - b2, b1 * u, -b1], axis=-1),
                np.stack([0.5 * (b2 - u / a), -0.5 * (b1 * u - 1.0 / a), 0.5 * b1], axis=-1),
            ],
            axis=-2,
        )
        return R, L

    def riemann_state(self, QL, QR):
        W = trrs_state(self.gamma, self.cons_to_prim(QL), self.cons_to_prim(QR))
        return self.prim_to_cons(W)


def advection_model(lam: float = 1.0, decay: float = 0.0) -> LinearAdvection:
    if not np.isfinite(lam):
        raise ValueError("advection speed must be finite")
    return LinearAdvection(float(lam), float(decay))


def euler_model(gamma: float = 1.4) -> Euler:
    return Euler(float(gamma))


def max_wavespeed(model: PdeModel, state) -> float:
    """max over cells and characteristic fields of |lambda_j(Q_i)|."""
    Q = state.averages if hasattr(state, "averages") else np.asarray(state, dtype=float)
    model.check_admissible(Q, "cell")
    return float(np.max(np.abs(model.eigenvalues(Q))))


def char_project(model: PdeModel, ref_state, values):
    """Characteristic variables w = R^{-1}(ref) v."""
    _, L = model.eigenvectors(ref_state)
    _check_basis(L)
    return np.einsum("...ij,...j->...i", L, values)


def char_unproject(model: PdeModel, ref_state, values):
    R, _ = model.eigenvectors(ref_state)
    _check_basis(R)
    return np.einsum("...ij,...j->...i", R, values)


def _check_basis(mat):
    if not np.all(np.isfinite(mat)):
        raise np.linalg.LinAlgError("eigenbasis is singular or undefined at the reference state")
