"""Exception taxonomy for the joinpoint package.

Every library error derives from JoinpointError.  Each class carries the
process exit code the command line tool maps it to: 1 for usage problems,
2 for data problems, 3 for numerical failures.
"""
from __future__ import annotations


class JoinpointError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class UsageError(JoinpointError):
    """Bad flags, options out of the supported range, malformed invocation."""

    exit_code = 1


class ConfigMismatch(JoinpointError):
    """Configuration violates its invariants or disagrees with a supplied
    null distribution (for example, trimming fractions that differ)."""

    exit_code = 1


class ArgumentOrder(JoinpointError):
    """Ordered argument pair supplied in the wrong order (expects k <= l)."""

    exit_code = 1


class DomainError(JoinpointError):
    """Argument outside the mathematical domain of the function."""

    exit_code = 1


class EmptySeries(JoinpointError):
    """Series construction from an empty value sequence."""


class NonFiniteValue(JoinpointError):
    """NaN or infinity in the input values; position is 1-based."""

    def __init__(self, position: int):
        super().__init__(f"non-finite value at position {position}")
        self.position = position


class EmptyRange(JoinpointError):
    """No admissible candidate indices for the given length and trimming."""


class RangeError(JoinpointError):
    """Subperiod bounds outside the series, inverted, or too short."""


class DegenerateSeries(JoinpointError):
    """Residual variance is zero; the studentized statistic is undefined."""


class ParseError(JoinpointError):
    """Malformed series file; line and column are 1-based."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class NonMonotoneLabels(JoinpointError):
    """Calendar labels that do not strictly increase."""


class GapInLabels(JoinpointError):
    """Calendar labels that skip a step; gaps are rejected, not imputed."""


class SingularSystem(JoinpointError):
    """Normal equations are singular at the requested changepoint."""

    exit_code = 3


class NumericalInstability(JoinpointError):
    """A closed-form evaluation degraded to overflow or non-finite output."""

    exit_code = 3


class FactorizationFailure(JoinpointError):
    """Covariance matrix not factorizable even after the jitter ladder."""

    exit_code = 3


class CacheCorruption(JoinpointError):
    """Cache entry exists but cannot be decoded back into a distribution."""
