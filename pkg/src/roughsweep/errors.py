"""Exception types shared across the solvers and samplers."""


class RoughSweepError(Exception):
    """Base class for all library-specific failures."""


class InfeasibleStart(RoughSweepError):
    """The initial state lies outside the admissible set at time zero."""


class PolytopeNonConvergence(RoughSweepError):
    """Dykstra's alternating projections did not settle within the sweep budget."""


class NoConvergence(RoughSweepError):
    """A fixed-point iteration exhausted its iteration budget.

    Solvers do not raise this themselves (they return the run with
    ``converged=False``); the CLI raises it under ``--strict``.
    """


class CovarianceNotPD(RoughSweepError):
    """A Gaussian covariance matrix failed its Cholesky factorization."""
