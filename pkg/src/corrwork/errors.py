"""Exception types shared across the package."""


class CorrworkError(Exception):
    """Base class for all package errors."""


class InvalidArgument(CorrworkError, ValueError):
    """An argument is malformed (non-finite, wrong shape, non-unitary, ...)."""


class DomainError(CorrworkError, ValueError):
    """An argument lies outside the range where the quantity is defined."""


class InvalidState(CorrworkError, ValueError):
    """A matrix failed a density-operator check.

    ``check`` names the failed test and ``residual`` carries its size.
    """

    def __init__(self, check, residual, message=None):
        self.check = check
        self.residual = residual
        super().__init__(message or f"density matrix failed {check} check (residual {residual:.3e})")


class PartitionStrategyError(DomainError):
    """The requested partition strategy cannot be applied to this rank."""


class ResourceError(CorrworkError, RuntimeError):
    """An enumeration or dense construction would exceed its configured cap."""

    def __init__(self, message, required=None, cap=None):
        self.required = required
        self.cap = cap
        super().__init__(message)


class PreconditionError(CorrworkError, ValueError):
    """A mathematical precondition of a construction does not hold."""


class ConfigurationError(CorrworkError, ValueError):
    """Incompatible combination of options."""
