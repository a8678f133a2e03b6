"""Exception hierarchy shared across the package."""


class FGPlateError(Exception):
    """Base class for all errors raised by fgplate."""


class DomainError(FGPlateError):
    """A parametric or through-thickness coordinate lies outside its domain."""


class RefinementError(FGPlateError):
    """Knot insertion request violates multiplicity or domain rules."""


class SingularMappingError(FGPlateError):
    """The geometry Jacobian is (numerically) singular at an evaluation point."""


class IntegrationError(FGPlateError):
    """A through-thickness integral failed its convergence check."""


class ConfigurationError(FGPlateError):
    """A case configuration is inconsistent or incomplete."""


class SolverError(FGPlateError):
    """The reduced linear system could not be solved reliably."""


class MassMatrixError(FGPlateError):
    """The mass matrix is not positive definite on the free DOFs."""


class SpectrumError(FGPlateError):
    """An eigenvalue solve produced no admissible eigenvalues."""


class GeometryError(FGPlateError):
    """A physical point could not be located on the patch."""
