"""Exception hierarchy shared by every module."""


class BMMError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(BMMError, ValueError):
    """Invalid estimator, bootstrap or experiment configuration."""


class EmptyInputError(BMMError, ValueError):
    """An operation that needs at least one value got none."""


class ShapeError(BMMError, ValueError):
    """Array lengths do not match."""


class DomainError(BMMError, ValueError):
    """An argument lies outside the region where a formula is valid."""


class UnsupportedOrderError(DomainError):
    """Moment order beyond what the recursion supports."""


class UnsupportedAlphaError(DomainError):
    """No real-valued density formula exists for this (sample, alpha)."""


class AtomError(DomainError):
    """Density requested at (or numerically at) one of the atoms."""


class BudgetError(BMMError, ValueError):
    """Exhaustive enumeration requested beyond its budget."""


class UndefinedMeanError(BMMError, ValueError):
    """The distribution has no finite mean."""


class NumericalError(BMMError, ArithmeticError):
    """A numerical routine failed to produce a usable value."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance."""
