"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(ValueError):
    """An argument lies outside the range where a bound or method is claimed."""


class ConvergenceError(RuntimeError):
    """A requested tolerance could not be met within the configured budget."""


class VarianceWarning(RuntimeWarning):
    """A Monte Carlo estimator shows signs of heavy tails."""
