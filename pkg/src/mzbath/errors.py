"""Exception hierarchy shared by all mzbath modules."""


class MzbathError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(MzbathError):
    """A parameter or configuration value violates its domain invariant."""


class TraceError(MzbathError):
    """A candidate density matrix does not have unit trace."""


class PositivityError(MzbathError):
    """A candidate density matrix is not positive semidefinite."""


class SupportError(MzbathError):
    """The support condition of an entropic quantity is violated
    (relative entropy with ker(sigma) overlapping supp(rho), or a
    fixed point with a zero eigenvalue)."""


class DomainError(MzbathError):
    """An argument lies outside the mathematical domain of a formula."""


class QuadratureError(MzbathError):
    """An adaptive quadrature failed to reach its tolerance."""


class StepSizeError(MzbathError):
    """An integration grid step violates the stability/accuracy bound."""


class CrossCheckError(MzbathError):
    """An internal redundant computation disagreed beyond tolerance."""
