"""Classical Riemann solvers.

* ``advection_rp``  -- exact upwind state for q_t + lambda q_x = 0.
* ``trrs_state``    -- two-rarefaction approximate solver for the ideal-gas
  Euler equations, closed form and vectorised over any leading shape.
* ``ExactRiemannSolution`` / ``exact_euler_rp`` -- iterative exact solver,
  used for reference profiles and as an oracle.
* ``godunov_flux``  -- physical flux of the sampled interface state.

Euler states here are primitive (rho, u, p) along the last axis.
"""
from __future__ import annotations

import numpy as np

from .errors import InadmissibleStateError, RiemannConvergenceError, VacuumError


def advection_rp(lam: float, qL, qR):
    """Godunov state at x/t = 0 for linear advection with speed ``lam``."""
    qL = np.asarray(qL, dtype=float)
    qR = np.asarray(qR, dtype=float)
    if lam > 0:
        return qL.copy()
    if lam < 0:
        return qR.copy()
    return 0.5 * (qL + qR)


def _split(prim):
    prim = np.asarray(prim, dtype=float)
    return prim[..., 0], prim[..., 1], prim[..., 2]


def trrs_star(gamma: float, primL, primR):
    """Star pressure and velocity of the two-rarefaction solver."""
    rL, uL, pL = _split(primL)
    rR, uR, pR = _split(primR)
    if np.any(rL <= 0) or np.any(rR <= 0) or np.any(pL <= 0) or np.any(pR <= 0):
        raise InadmissibleStateError("two-rarefaction solver needs rho > 0 and p > 0")
    z = (gamma - 1.0) / (2.0 * gamma)
    aL = np.sqrt(gamma * pL / rL)
    aR = np.sqrt(gamma * pR / rR)
    num = aL + aR - 0.5 * (gamma - 1.0) * (uR - uL)
    if np.any(num <= 0):
        raise VacuumError("Riemann data generate vacuum (pressure positivity condition violated)")
    pstar = (num / (aL / pL**z + aR / pR**z)) ** (1.0 / z)
    fL = 2.0 * aL / (gamma - 1.0) * ((pstar / pL) ** z - 1.0)
    fR = 2.0 * aR / (gamma - 1.0) * ((pstar / pR) ** z - 1.0)
    ustar = 0.5 * (uL + uR) + 0.5 * (fR - fL)
    return pstar, ustar


def trrs_state(gamma: float, primL, primR):
    """Primitive state at x/t = 0 from the two-rarefaction Riemann solver.

    Both non-linear waves are treated as rarefactions, also when the star
    pressure exceeds the data pressure.
    """
    rL, uL, pL = _split(primL)
    rR, uR, pR = _split(primR)
    pstar, ustar = trrs_star(gamma, primL, primR)
    g = gamma
    aL = np.sqrt(g * pL / rL)
    aR = np.sqrt(g * pR / rR)
    gm1 = g - 1.0
    ratioL = (pstar / pL) ** (1.0 / g)
    ratioR = (pstar / pR) ** (1.0 / g)
    rsL = rL * ratioL
    rsR = rR * ratioR
    asL = aL * (pstar / pL) ** (gm1 / (2 * g))
    asR = aR * (pstar / pR) ** (gm1 / (2 * g))

    # fan states at x/t = 0
    aFL = 2.0 / (g + 1.0) * (aL + 0.5 * gm1 * uL)
    aFR = 2.0 / (g + 1.0) * (aR - 0.5 * gm1 * uR)
    with np.errstate(invalid="ignore", divide="ignore"):
        fanL = (rL * (aFL / aL) ** (2.0 / gm1), aFL, pL * (aFL / aL) ** (2.0 * g / gm1))
        fanR = (rR * (aFR / aR) ** (2.0 / gm1), -aFR, pR * (aFR / aR) ** (2.0 * g / gm1))

    left_side = ustar >= 0.0
    # left wave
    headL = uL - aL
    tailL = ustar - asL
    rho_l = np.where(headL >= 0, rL, np.where(tailL <= 0, rsL, fanL[0]))
    u_l = np.where(headL >= 0, uL, np.where(tailL <= 0, ustar, fanL[1]))
    p_l = np.where(headL >= 0, pL, np.where(tailL <= 0, pstar, fanL[2]))
    # right wave
    headR = uR + aR
    tailR = ustar + asR
    rho_r = np.where(headR <= 0, rR, np.where(tailR >= 0, rsR, fanR[0]))
    u_r = np.where(headR <= 0, uR, np.where(tailR >= 0, ustar, fanR[1]))
    p_r = np.where(headR <= 0, pR, np.where(tailR >= 0, pstar, fanR[2]))

    return np.stack(
        [
            np.where(left_side, rho_l, rho_r),
            np.where(left_side, u_l, u_r),
            np.where(left_side, p_l, p_r),
        ],
        axis=-1,
    )


class ExactRiemannSolution:
    """Exact self-similar solution of the ideal-gas Euler Riemann problem."""

    def __init__(self, gamma: float, primL, primR, tol: float = 1e-12, max_iter: int = 100):
        self.gamma = g = float(gamma)
        self.rL, self.uL, self.pL = (float(v) for v in primL)
        self.rR, self.uR, self.pR = (float(v) for v in primR)
        if min(self.rL, self.rR, self.pL, self.pR) <= 0:
            raise InadmissibleStateError("exact Riemann solver needs rho > 0 and p > 0")
        self.aL = np.sqrt(g * self.pL / self.rL)
        self.aR = np.sqrt(g * self.pR / self.rR)
        if 2.0 / (g - 1.0) * (self.aL + self.aR) <= self.uR - self.uL:
            raise VacuumError("Riemann data generate vacuum")
        self.pstar, self.ustar = self._solve_star(tol, max_iter)

    def _f(self, p, rK, pK, aK):
        g = self.gamma
        if p > pK:
            A = 2.0 / ((g + 1.0) * rK)
            B = (g - 1.0) / (g + 1.0) * pK
            sq = np.sqrt(A / (p + B))
            return (p - pK) * sq, sq * (1.0 - 0.5 * (p - pK) / (B + p))
        z = (g - 1.0) / (2.0 * g)
        f = 2.0 * aK / (g - 1.0) * ((p / pK) ** z - 1.0)
        df = (p / pK) ** (-(g + 1.0) / (2.0 * g)) / (rK * aK)
        return f, df

    def _solve_star(self, tol, max_iter):
        pstar, _ = trrs_star(self.gamma, (self.rL, self.uL, self.pL), (self.rR, self.uR, self.pR))
        p = max(float(pstar), 1e-12)
        du = self.uR - self.uL
        for _ in range(max_iter):
            fL, dfL = self._f(p, self.rL, self.pL, self.aL)
            fR, dfR = self._f(p, self.rR, self.pR, self.aR)
            p_new = p - (fL + fR + du) / (dfL + dfR)
            if p_new <= 0:
                p_new = 0.5 * p
            change = 2.0 * abs(p_new - p) / (p_new + p)
            p = p_new
            if change < tol:
                fL, _ = self._f(p, self.rL, self.pL, self.aL)
                fR, _ = self._f(p, self.rR, self.pR, self.aR)
                return p, 0.5 * (self.uL + self.uR) + 0.5 * (fR - fL)
        raise RiemannConvergenceError(
            f"exact Riemann solver did not converge in {max_iter} iterations (last change {change:.3e})"
        )

    def star_densities(self):
        g = self.gamma
        out = []
        for rK, pK in ((self.rL, self.pL), (self.rR, self.pR)):
            if self.pstar > pK:
                ratio = self.pstar / pK
                gr = (g - 1.0) / (g + 1.0)
                out.append(rK * (ratio + gr) / (gr * ratio + 1.0))
            else:
                out.append(rK * (self.pstar / pK) ** (1.0 / g))
        return tuple(out)

    def wave_speeds(self):
        """Speeds of every wave edge: left head/tail (or shock), contact, right."""
        g = self.gamma
        speeds = []
        rsL, rsR = self.star_densities()
        if self.pstar > self.pL:
            speeds.append(
                self.uL
                - self.aL * np.sqrt((g + 1) / (2 * g) * self.pstar / self.pL + (g - 1) / (2 * g))
            )
        else:
            speeds += [self.uL - self.aL, self.ustar - np.sqrt(g * self.pstar / rsL)]
        speeds.append(self.ustar)
        if self.pstar > self.pR:
            speeds.append(
                self.uR
                + self.aR * np.sqrt((g + 1) / (2 * g) * self.pstar / self.pR + (g - 1) / (2 * g))
            )
        else:
            speeds += [self.ustar + np.sqrt(g * self.pstar / rsR), self.uR + self.aR]
        return speeds

    def sample(self, s):
        """Primitive state at similarity coordinate(s) ``s = x/t``; shape (..., 3)."""
        g = self.gamma
        s = np.asarray(s, dtype=float)
        rsL, rsR = self.star_densities()
        ps, us = self.pstar, self.ustar
        rho = np.empty(s.shape)
        u = np.empty(s.shape)
        p = np.empty(s.shape)

        left = s <= us
        # left of contact
        if ps > self.pL:
            shock = self.uL - self.aL * np.sqrt((g + 1) / (2 * g) * ps / self.pL + (g - 1) / (2 * g))
            pre = left & (s <= shock)
            star = left & (s > shock)
            fan = np.zeros_like(left)
        else:
            head = self.uL - self.aL
            tail = us - self.aL * (ps / self.pL) ** ((g - 1) / (2 * g))
            pre = left & (s <= head)
            star = left & (s >= tail)
            fan = left & (s > head) & (s < tail)
        rho[pre], u[pre], p[pre] = self.rL, self.uL, self.pL
        rho[star], u[star], p[star] = rsL, us, ps
        if np.any(fan):
            c = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * self.aL) * (self.uL - s[fan])
            rho[fan] = self.rL * c ** (2.0 / (g - 1.0))
            u[fan] = 2.0 / (g + 1.0) * (self.aL + 0.5 * (g - 1.0) * self.uL + s[fan])
            p[fan] = self.pL * c ** (2.0 * g / (g - 1.0))

        right = ~left
        if ps > self.pR:
            shock = self.uR + self.aR * np.sqrt((g + 1) / (2 * g) * ps / self.pR + (g - 1) / (2 * g))
            pre = right & (s >= shock)
            star = right & (s < shock)
            fan = np.zeros_like(right)
        else:
            head = self.uR + self.aR
            tail = us + self.aR * (ps / self.pR) ** ((g - 1) / (2 * g))
            pre = right & (s >= head)
            star = right & (s <= tail)
            fan = right & (s < head) & (s > tail)
        rho[pre], u[pre], p[pre] = self.rR, self.uR, self.pR
        rho[star], u[star], p[star] = rsR, us, ps
        if np.any(fan):
            c = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * self.aR) * (self.uR - s[fan])
            rho[fan] = self.rR * c ** (2.0 / (g - 1.0))
            u[fan] = 2.0 / (g + 1.0) * (-self.aR + 0.5 * (g - 1.0) * self.uR + s[fan])
            p[fan] = self.pR * c ** (2.0 * g / (g - 1.0))
        return np.stack([rho, u, p], axis=-1)


def exact_euler_rp(gamma: float, primL, primR, x_over_t):
    return ExactRiemannSolution(gamma, primL, primR).sample(x_over_t)


def godunov_flux(model, QL, QR):
    """Physical flux evaluated at the model's Godunov state for (QL, QR)."""
    return model.flux(model.riemann_state(QL, QR))
