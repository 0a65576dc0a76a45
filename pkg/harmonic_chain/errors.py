"""
Exception hierarchy for the harmonic chain engine.
"""


class ChainError(Exception):
    """Base class for all errors raised by the engine."""


class ParameterError(ChainError, ValueError):
    """An argument violates an operation's precondition."""


class CostGuardError(ParameterError):
    """The requested computation exceeds the exact-method size guard."""


class ConfigurationError(ChainError):
    """Environment settings could not be parsed."""


class ComputeError(ChainError):
    """A numerical invariant was violated while computing a result."""


class FitError(ChainError):
    """Regression input is insufficient or outside the model's domain."""
