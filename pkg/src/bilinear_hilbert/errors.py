"""Exception hierarchy shared by every module of the package."""


class BhtError(Exception):
    """Base class for all package errors."""


class ConfigurationError(BhtError, ValueError):
    """Invalid parameters for a function, operator or run configuration."""


class DomainError(BhtError, ValueError):
    """Evaluation requested outside the domain where a value is defined."""


class LoadError(BhtError):
    """A sampled signal file could not be read or failed validation."""


class AccuracyError(BhtError):
    """Adaptive quadrature ran out of subdivisions before converging.

    The best available estimate is kept on the exception so callers can
    decide whether it is good enough.
    """

    def __init__(self, message, value=float("nan"), err_est=float("inf")):
        super().__init__(message)
        self.value = value
        self.err_est = err_est


class TailError(BhtError, ValueError):
    """A declared decay class has a non-integrable tail."""
