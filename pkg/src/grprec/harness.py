"""Test-case registry, simulation driver, convergence and efficiency studies.

CSV schemas (all floats written as ``%.5e``, i.e. 6 significant digits):

convergence
    scheme, order, test, M, linf, l1, l2, order_linf, order_l1, order_l2, cpu_seconds
efficiency
    scheme, order, test, M, l1, cpu_seconds
extrapolation
    scheme, order, test, slope, intercept, cpu_at_target, target_error
profile
    x, rho, u, p, rho_exact, u_exact, p_exact
solution
    x, q0[, q1, q2], exact0[, exact1, exact2]
"""
from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .ader import (
    DGState,
    SchemeConfig,
    bootstrap_first_step,
    dg_step,
    fv_step,
    timestep,
)
from .errors import InadmissibleStateError, NumericalFailure
from .mesh import FieldState, Grid, build_grid, cell_average, error_norms, project_modal
from .models import Euler, PdeModel, advection_model, euler_model
from .riemann import ExactRiemannSolution

log = logging.getLogger(__name__)

CSV_VERSION = 1
FLOAT_FMT = "{:.5e}"

RIEMANN_DATA = {
    # rhoL, uL, pL, rhoR, uR, pR, x_c, t_end
    "sod": ((1.0, 0.0, 1.0), (0.125, 0.0, 0.1), 0.3, 0.2),
    "123": ((1.0, -2.0, 0.4), (1.0, 2.0, 0.4), 0.5, 0.15),
}


@dataclass
class TestCase:
    name: str
    model: PdeModel
    ic: Callable[[np.ndarray], np.ndarray]
    x_min: float
    x_max: float
    t_end: float
    cfl: float = 0.9
    boundary: str = "periodic"
    exact: Optional[Callable[[np.ndarray, float], np.ndarray]] = None
    # discontinuity / kink locations of the exact solution at time t
    breakpoints: Callable[[float], Sequence[float]] = field(default=lambda t: ())
    smooth: bool = True

    __test__ = False  # not a pytest class

    def grid(self, M: int) -> Grid:
        return build_grid(self.x_min, self.x_max, M, self.boundary)

    def exact_averages(self, grid: Grid, t: float, quad_order: int = 10) -> np.ndarray:
        if self.exact is None:
            raise ValueError(f"test case {self.name!r} has no exact solution")
        return cell_average(grid, lambda x: self.exact(x, t), quad_order, self.breakpoints(t))


def _multiwave(x):
    x = np.asarray(x, dtype=float)
    q = np.zeros_like(x)
    a = (x >= -0.8) & (x <= -0.6)
    q[a] = np.exp(-np.log(2.0) * (x[a] + 0.7) ** 2 / 0.0009)
    q[(x >= -0.4) & (x <= -0.2)] = 1.0
    c = (x >= 0.0) & (x <= 0.2)
    q[c] = 1.0 - np.abs(10.0 * x[c] - 1.0)
    d = (x >= 0.4) & (x <= 0.6)
    q[d] = np.sqrt(np.maximum(1.0 - 100.0 * (x[d] - 0.5) ** 2, 0.0))
    return q


def _square(x):
    x = np.asarray(x, dtype=float)
    return ((x >= -0.3) & (x <= 0.3)).astype(float)


def _quartic(x):
    return np.sin(np.pi * np.asarray(x, dtype=float)) ** 4


def _advection_case(name, profile, kinks, t_end, smooth, lam=1.0):
    x_min, x_max = -1.0, 1.0
    L = x_max - x_min

    def wrap(x):
        return x_min + np.mod(np.asarray(x, dtype=float) - x_min, L)

    def exact(x, t):
        return profile(wrap(np.asarray(x) - lam * t))

    def breakpoints(t):
        return sorted(float(wrap(b + lam * t)) for b in kinks)

    return TestCase(
        name=name,
        model=advection_model(lam),
        ic=profile,
        x_min=x_min,
        x_max=x_max,
        t_end=t_end,
        exact=exact,
        breakpoints=breakpoints,
        smooth=smooth,
    )


def _euler_smooth(gamma):
    model = euler_model(gamma)

    def exact(x, t):
        x = np.asarray(x, dtype=float)
        rho = 1.0 + 0.2 * np.sin(2.0 * np.pi * (x - t))
        W = np.stack([rho, np.ones_like(x), np.full_like(x, 2.0)], axis=-1)
        return model.prim_to_cons(W)

    return TestCase(
        name="euler-smooth",
        model=model,
        ic=lambda x: exact(x, 0.0),
        x_min=0.0,
        x_max=1.0,
        t_end=4.0,
        exact=exact,
    )


def _riemann_case(name, gamma):
    model = euler_model(gamma)
    WL, WR, xc, t_end = RIEMANN_DATA[name]
    sol = ExactRiemannSolution(gamma, WL, WR)

    def ic(x):
        x = np.asarray(x, dtype=float)
        W = np.where((x <= xc)[..., None], np.asarray(WL), np.asarray(WR))
        return model.prim_to_cons(W)

    def exact(x, t):
        if t <= 0:
            return ic(x)
        return model.prim_to_cons(sol.sample((np.asarray(x, dtype=float) - xc) / t))

    def breakpoints(t):
        return [xc + t * s for s in sol.wave_speeds()] if t > 0 else [xc]

    return TestCase(
        name=name,
        model=model,
        ic=ic,
        x_min=0.0,
        x_max=1.0,
        t_end=t_end,
        boundary="transmissive",
        exact=exact,
        breakpoints=breakpoints,
        smooth=False,
    )


TEST_CASES = ("multiwave", "square-wave", "quartic-sine", "euler-smooth", "sod", "123")


def get_test_case(name: str, gamma: float = 1.4, t_end: Optional[float] = None) -> TestCase:
    """Build a registered test case, optionally overriding its final time."""
    if name == "multiwave":
        kinks = (-0.8, -0.7, -0.6, -0.4, -0.2, 0.0, 0.1, 0.2, 0.4, 0.6)
        case = _advection_case(name, _multiwave, kinks, 2000.0, smooth=False)
    elif name == "square-wave":
        case = _advection_case(name, _square, (-0.3, 0.3), 4.0, smooth=False)
    elif name == "quartic-sine":
        case = _advection_case(name, _quartic, (), 4.0, smooth=True)
    elif name == "euler-smooth":
        case = _euler_smooth(gamma)
    elif name in RIEMANN_DATA:
        case = _riemann_case(name, gamma)
    else:
        raise ValueError(f"unknown test case {name!r}; expected one of {TEST_CASES}")
    if t_end is not None:
        if t_end < 0:
            raise ValueError("t_end must be non-negative")
        case.t_end = float(t_end)
    return case


# --------------------------------------------------------------------------
@dataclass
class RunResult:
    state: FieldState
    seconds: float
    steps: int
    dg_state: Optional[DGState] = None
    retries: int = 0


# C in dt = C/(2m+1) dx/S_max.  ADER-DG is linearly stable up to Courant
# numbers of about 0.33, 0.17, 0.10, 0.069 for m = 1..4, so C = 0.9 is
# unstable for m >= 2 while C = 0.5 is stable for every degree used here.
DG_CFL = 0.5


def make_config(scheme: str, order: int, case: TestCase, M: int, cfl: Optional[float] = None, bootstrap="weno-dk"):
    """Scheme configuration for ``case`` on M cells.

    Without an explicit ``cfl`` FV schemes use the test's CFL number and DG
    uses ``DG_CFL``.
    """
    if cfl is None:
        cfl = DG_CFL if scheme == "dg" else case.cfl
    return SchemeConfig(
        scheme=scheme,
        order=order,
        model=case.model,
        grid=case.grid(M),
        cfl=cfl,
        bootstrap=bootstrap,
    )


def initial_state(config: SchemeConfig, case: TestCase, quad_order: int = 10):
    grid = config.grid
    bps = case.breakpoints(0.0)
    if config.scheme == "dg":
        return DGState(project_modal(grid, case.ic, config.degree, quad_order, bps))
    return FieldState(cell_average(grid, case.ic, quad_order, bps))


PREDICTOR_RETRIES = 2


def _is_predictor_failure(exc) -> bool:
    where = str(getattr(exc, "where", ""))
    return isinstance(exc, InadmissibleStateError) and where.startswith(("predictor", "interface"))


def run(
    config: SchemeConfig,
    case: TestCase,
    t_end: Optional[float] = None,
    max_retries: int = PREDICTOR_RETRIES,
) -> RunResult:
    """Advance the initial data of ``case`` to ``t_end`` (default ``case.t_end``).

    A step whose predictor yields non-finite values or inadmissible interface
    traces is retried
    with half the time step, at most ``max_retries`` times; inadmissible cell
    averages are never retried.  Only the stepping loop is timed.
    """
    t_end = case.t_end if t_end is None else float(t_end)
    state = initial_state(config, case)
    steps = retried = 0
    dg = config.scheme == "dg"
    ledger = None
    start = time.perf_counter()
    try:
        while state.t < t_end:
            dt = timestep(config, state, t_end)
            for attempt in range(max_retries + 1):
                try:
                    if dg:
                        new = dg_step(config, state, dt)
                    elif ledger is None:
                        new = bootstrap_first_step(config, state, dt)
                    else:
                        new = fv_step(config, state, ledger, dt)
                    break
                except InadmissibleStateError as exc:
                    if attempt == max_retries or not _is_predictor_failure(exc):
                        raise
                    dt *= 0.5
                    retried += 1
            if dg:
                state = new
            else:
                state, ledger = new
            steps += 1
    except NumericalFailure as exc:
        exc.args = (f"{exc.args[0] if exc.args else exc} [step {steps}, t={state.t:.6g}]",) + exc.args[1:]
        raise
    seconds = time.perf_counter() - start
    if retried:
        log.info("%s: %d predictor retries with halved time step", case.name, retried)
    if dg:
        return RunResult(state.to_field(), seconds, steps, dg_state=state, retries=retried)
    return RunResult(state, seconds, steps, retries=retried)


# --------------------------------------------------------------------------
def empirical_orders(errors: Sequence[float]) -> list:
    """log2(e_k / e_{k+1}); NaN wherever a ratio is undefined."""
    out = [math.nan]
    for a, b in zip(errors[:-1], errors[1:]):
        out.append(math.log2(a / b) if a > 0 and b > 0 else math.nan)
    return out


@dataclass
class ConvergenceRow:
    M: int
    linf: float
    l1: float
    l2: float
    cpu: float
    order_linf: float = math.nan
    order_l1: float = math.nan
    order_l2: float = math.nan


@dataclass
class ConvergenceReport:
    scheme: str
    order: int
    test: str
    rows: list = field(default_factory=list)

    @property
    def meshes(self):
        return [r.M for r in self.rows]

    @property
    def l1(self):
        return [r.l1 for r in self.rows]

    def finalize(self):
        for key in ("linf", "l1", "l2"):
            for row, o in zip(self.rows, empirical_orders([getattr(r, key) for r in self.rows])):
                setattr(row, "order_" + key, o)
        return self


def convergence_study(
    scheme: str,
    order: int,
    case: TestCase,
    meshes: Sequence[int],
    cfl: Optional[float] = None,
    component: int = 0,
    bootstrap: str = "weno-dk",
) -> ConvergenceReport:
    """Errors of cell averages against exact averages on a mesh sequence.

    ``component`` picks the conserved variable used for the norms (density for
    the Euler equations).
    """
    if case.exact is None:
        raise ValueError(f"test case {case.name!r} has no exact solution")
    if len(meshes) < 2:
        raise ValueError("a convergence study needs at least two meshes")
    report = ConvergenceReport(scheme, order, case.name)
    for M in meshes:
        config = make_config(scheme, order, case, M, cfl, bootstrap)
        res = run(config, case)
        exact = case.exact_averages(config.grid, res.state.t)
        linf, l1, l2 = error_norms(res.state, exact, config.grid.dx)
        report.rows.append(
            ConvergenceRow(M, float(linf[component]), float(l1[component]), float(l2[component]), res.seconds)
        )
    return report.finalize()


# --------------------------------------------------------------------------
@dataclass
class EfficiencyPoint:
    scheme: str
    order: int
    M: int
    l1: float
    cpu: float


@dataclass
class PowerLawFit:
    """log10(cpu) = intercept + slope * log10(error)."""

    slope: float
    intercept: float

    def cpu_at(self, error: float) -> float:
        return 10.0 ** (self.intercept + self.slope * math.log10(error))

    @property
    def order(self) -> float:
        """p in error = C * cpu^(-p)."""
        return -1.0 / self.slope


def fit_power_law(errors: Sequence[float], cpus: Sequence[float]) -> PowerLawFit:
    errors = np.asarray(errors, dtype=float)
    cpus = np.asarray(cpus, dtype=float)
    keep = (errors > 0) & (cpus > 0)
    if keep.sum() < 2:
        raise ValueError("extrapolation needs at least two meshes with positive error and CPU time")
    slope, intercept = np.polyfit(np.log10(errors[keep]), np.log10(cpus[keep]), 1)
    return PowerLawFit(float(slope), float(intercept))


def efficiency_study(
    schemes: Iterable[str],
    orders: Iterable[int],
    case: TestCase,
    meshes: Sequence[int],
    repeats: int = 3,
    cfl: Optional[float] = None,
    component: int = 0,
    target_error: float = 1e-16,
):
    """Median CPU of ``repeats`` runs per (scheme, order, M) and extrapolated CPU.

    Returns (points, fits) where ``fits[(scheme, order)]`` is a PowerLawFit.
    """
    if len(meshes) < 2:
        raise ValueError("efficiency extrapolation needs at least two meshes")
    if case.exact is None:
        raise ValueError(f"test case {case.name!r} has no exact solution")
    points, fits = [], {}
    for scheme in schemes:
        for order in orders:
            errs, cpus = [], []
            for M in meshes:
                config = make_config(scheme, order, case, M, cfl)
                times = []
                for _ in range(repeats):
                    res = run(config, case)
                    times.append(res.seconds)
                exact = case.exact_averages(config.grid, res.state.t)
                l1 = float(error_norms(res.state, exact, config.grid.dx)[1][component])
                cpu = float(np.median(times))
                points.append(EfficiencyPoint(scheme, order, M, l1, cpu))
                errs.append(l1)
                cpus.append(cpu)
            fits[(scheme, order)] = fit_power_law(errs, cpus)
    return points, fits


def frontier_dominates(fast: Sequence[EfficiencyPoint], slow: Sequence[EfficiencyPoint]) -> bool:
    """True when, at every error level reached by ``slow``, ``fast`` needs less CPU.

    ``fast`` CPU at a given error comes from piecewise log-log interpolation of
    its own points (linear extrapolation beyond its range).
    """
    fast = sorted(fast, key=lambda p: -p.l1)
    le = np.log10([p.l1 for p in fast])
    lc = np.log10([p.cpu for p in fast])
    for p in slow:
        e = math.log10(p.l1)
        if e >= le[0]:
            k = 0
        elif e <= le[-1]:
            k = len(le) - 2
        else:
            k = int(np.searchsorted(-le, -e)) - 1
        k = min(max(k, 0), len(le) - 2)
        c = lc[k] + (lc[k + 1] - lc[k]) * (e - le[k]) / (le[k + 1] - le[k])
        if not c < math.log10(p.cpu):
            return False
    return True


# --------------------------------------------------------------------------
@dataclass
class Profile:
    x: np.ndarray
    numerical: np.ndarray  # (M, 3) primitive
    exact: np.ndarray  # (M, 3) primitive, from exact cell averages
    scheme: str = ""
    order: int = 0


def riemann_profiles(test: str, schemes: Iterable[str], order: int, M: int = 100, cfl: float = 0.9, gamma: float = 1.4):
    """Numerical and exact (rho, u, p) profiles for a shock-tube problem."""
    if test not in RIEMANN_DATA:
        raise ValueError(f"unknown Riemann test {test!r}; expected sod or 123")
    case = get_test_case(test, gamma)
    model: Euler = case.model
    out = {}
    for scheme in schemes:
        config = make_config(scheme, order, case, M, cfl)
        res = run(config, case)
        exact = model.cons_to_prim(case.exact_averages(config.grid, res.state.t))
        out[scheme] = Profile(config.grid.centers, model.cons_to_prim(res.state.averages), exact, scheme, order)
    return out


def profile_l1(profile: Profile, var: int = 0, dx: Optional[float] = None) -> float:
    dx = profile.x[1] - profile.x[0] if dx is None else dx
    return float(np.sum(np.abs(profile.numerical[:, var] - profile.exact[:, var])) * dx)


def total_variation(values: np.ndarray, periodic: bool = True) -> float:
    v = np.asarray(values, dtype=float).ravel()
    if periodic:
        v = np.append(v, v[0])
    return float(np.sum(np.abs(np.diff(v))))


def diagnostics(state: FieldState, periodic: bool = True) -> dict:
    """Total variation and extrema of the first component."""
    q = state.averages[:, 0]
    return {"tv": total_variation(q, periodic), "min": float(q.min()), "max": float(q.max()), "linf": float(np.abs(q).max())}


# --------------------------------------------------------------------------
def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return FLOAT_FMT.format(float(v))
    return str(v)


def write_rows(path, header: Sequence[str], rows: Iterable[Sequence]):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


CONVERGENCE_HEADER = (
    "scheme", "order", "test", "M", "linf", "l1", "l2",
    "order_linf", "order_l1", "order_l2", "cpu_seconds",
)
EFFICIENCY_HEADER = ("scheme", "order", "test", "M", "l1", "cpu_seconds")
EXTRAPOLATION_HEADER = ("scheme", "order", "test", "slope", "intercept", "cpu_at_target", "target_error")
PROFILE_HEADER = ("x", "rho", "u", "p", "rho_exact", "u_exact", "p_exact")


def emit_csv(obj, path, test: str = "", target_error: float = 1e-16):
    """Write a ConvergenceReport, Profile, efficiency point list or fit dict."""
    if isinstance(obj, ConvergenceReport):
        rows = (
            (obj.scheme, obj.order, obj.test, r.M, r.linf, r.l1, r.l2, r.order_linf, r.order_l1, r.order_l2, r.cpu)
            for r in obj.rows
        )
        write_rows(path, CONVERGENCE_HEADER, rows)
    elif isinstance(obj, Profile):
        rows = (tuple(float(v) for v in (x, *num, *ex)) for x, num, ex in zip(obj.x, obj.numerical, obj.exact))
        write_rows(path, PROFILE_HEADER, rows)
    elif isinstance(obj, dict):
        rows = (
            (s, o, test, f.slope, f.intercept, f.cpu_at(target_error), float(target_error))
            for (s, o), f in obj.items()
        )
        write_rows(path, EXTRAPOLATION_HEADER, rows)
    elif isinstance(obj, (list, tuple)) and all(isinstance(p, EfficiencyPoint) for p in obj):
        write_rows(path, EFFICIENCY_HEADER, ((p.scheme, p.order, test, p.M, p.l1, p.cpu) for p in obj))
    else:
        raise TypeError(f"cannot write {type(obj).__name__} as CSV")
    return path


def emit_solution_csv(state: FieldState, grid: Grid, path, exact: Optional[np.ndarray] = None):
    N = state.averages.shape[1]
    header = ["x"] + [f"q{k}" for k in range(N)]
    cols = [grid.centers] + [state.averages[:, k] for k in range(N)]
    if exact is not None:
        header += [f"exact{k}" for k in range(N)]
        cols += [exact[:, k] for k in range(N)]
    write_rows(path, header, (tuple(float(c[i]) for c in cols) for i in range(grid.num_cells)))
    return path
