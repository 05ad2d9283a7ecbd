"""Exception hierarchy shared by every module."""


class IsoprofileError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(IsoprofileError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class UsageError(IsoprofileError, ValueError):
    """A request is malformed (empty grid, zero samples, bad flag value)."""


class ConfigurationError(IsoprofileError, ValueError):
    """A body/density configuration cannot be handled (e.g. rejection rate too low)."""


class UnsupportedCombinationError(IsoprofileError, ValueError):
    """No exact distance oracle exists for the requested (cut, shape, norm)."""


class InfeasibleCut(IsoprofileError):
    """No cut position realises the requested mass fraction for this separation.

    Sweep drivers catch this and skip the point; it is not a numerical failure.
    """


class ConvergenceError(IsoprofileError, RuntimeError):
    """A root could not be bracketed or a minimum could not be enclosed."""


class OracleDisagreement(IsoprofileError, ArithmeticError):
    """Two independent evaluation routes of the same quantity disagree."""
