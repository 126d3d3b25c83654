"""High-order ADER finite volume schemes with GRP-based reconstruction in 1D."""
from .ader import (
    DGState,
    SchemeConfig,
    SpaceTimePredictor,
    bootstrap_first_step,
    det_predictor,
    dg_step,
    fv_step,
    interface_quadrature,
    timestep,
)
from .errors import InadmissibleStateError, NumericalFailure, StaleLedgerError, VacuumError
from .harness import (
    ConvergenceReport,
    TestCase,
    convergence_study,
    efficiency_study,
    emit_csv,
    get_test_case,
    riemann_profiles,
    run,
)
from .mesh import FieldState, Grid, InterfaceLedger, build_grid, cell_average, error_norms
from .models import Euler, LinearAdvection, PdeModel, advection_model, euler_model
from .poly import ReconstructionPolynomial, gauss_legendre
from .reconstruction import grprec, grprec_nl, reconstruct_field, weno_dk
from .riemann import ExactRiemannSolution, exact_euler_rp, godunov_flux, trrs_state

__all__ = [name for name in dir() if not name.startswith("_")]
