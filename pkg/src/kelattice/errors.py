"""Exception hierarchy shared by the numeric and symbolic layers."""


class KelatticeError(Exception):
    """Base class for all package errors."""


class DomainError(KelatticeError, ValueError):
    """An argument lies outside the domain of a function."""


class PoleError(KelatticeError, ArithmeticError):
    """A function was evaluated exactly at a pole."""


class UnsupportedArgumentError(KelatticeError, ValueError):
    """The requested argument is outside the supported evaluation range."""


class ConvergenceError(KelatticeError, ArithmeticError):
    """An iteration or quadrature failed to reach its tolerance.

    Parameters
    ----------
    message : str
        Human readable reason.
    values : tuple of float, optional
        The last iterates (for quadrature, the two final level sums).
    """

    def __init__(self, message: str, values: tuple = ()):
        super().__init__(message)
        self.values = tuple(values)


class IntegrabilityError(KelatticeError, ValueError):
    """An integrand fails the endpoint integrability test."""


class NonCancellingError(KelatticeError, ArithmeticError):
    """A regularized limit does not exist: the pole is not cancelled."""


class DimensionTooLargeError(KelatticeError, ValueError):
    """Direct lattice summation was requested above the supported dimension."""


class TailUnboundedError(KelatticeError, ArithmeticError):
    """No truncation certificate is available for a direct lattice sum."""


class SymbolicError(KelatticeError, ArithmeticError):
    """An exact-arithmetic invariant failed (indivisible, residual E terms...)."""


class SchemaError(KelatticeError, ValueError):
    """A registry record does not match the schema."""


class RegistryParseError(KelatticeError, ValueError):
    """A registry file is not valid JSON."""


class DuplicateIdError(KelatticeError, ValueError):
    """Two registry records share an id."""
