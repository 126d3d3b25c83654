"""Exception types shared across the solver."""


class NumericalFailure(RuntimeError):
    """The discrete solution left the admissible set or a solver broke down."""


class InadmissibleStateError(NumericalFailure):
    """Non-physical state (e.g. negative density or pressure) in some cell."""

    def __init__(self, message: str, index=None, where: str = ""):
        super().__init__(message)
        self.index = index
        self.where = where


class VacuumError(NumericalFailure):
    """Riemann data that would generate vacuum."""


class RiemannConvergenceError(NumericalFailure):
    pass


class StaleLedgerError(ValueError):
    """Interface ledger used at the wrong step."""
