"""Exception hierarchy shared by the construction and analysis modules."""


class QSWError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(QSWError, ValueError):
    """Input outside the domain of an evaluator (non-finite values, insufficient decay)."""


class GridError(QSWError, ValueError):
    """Sampling grid too coarse for the requested degree (aliasing)."""


class ConstructionError(QSWError):
    """A wavelet system cannot be built with the requested parameters."""


class PolicyError(ConstructionError):
    """The n(l) selection sweep ran out of candidates."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class NumericalConsistencyError(QSWError, ArithmeticError):
    """A quantity that must be non-negative or finite came out otherwise."""
