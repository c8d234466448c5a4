"""Exception hierarchy shared by all modules."""


class RelGodunovError(Exception):
    """Base class for every error raised by the package."""

    kind = "error"


class DomainError(RelGodunovError, ValueError):
    """An argument lies outside the valid interval of an evaluator."""

    kind = "domain"


class SuperluminalError(DomainError):
    kind = "superluminal"


class InvalidStateError(RelGodunovError, ValueError):
    """A Godunov covector is not timelike."""

    kind = "invalid-state"


class PreconditionError(RelGodunovError, ValueError):
    kind = "precondition"


class DegenerateTemperatureError(DomainError):
    kind = "degenerate-temperature"


class UnsupportedError(RelGodunovError, TypeError):
    kind = "unsupported"


class NumericError(RelGodunovError, ArithmeticError):
    """Quadrature or iteration failed to reach the requested tolerance."""

    kind = "numeric"

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class NoRootError(NumericError):
    kind = "no-root"


class DegenerateShockError(RelGodunovError, ValueError):
    kind = "degenerate"


class SubsonicUpstreamError(RelGodunovError, ValueError):
    kind = "subsonic-upstream"


class UnphysicalStateError(RelGodunovError, ValueError):
    """Conserved variables admit no primitive state."""

    kind = "unphysical-state"

    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell


class UsageError(RelGodunovError):
    kind = "usage"
