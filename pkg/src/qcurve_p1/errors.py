"""Exception hierarchy shared by every layer of the engine."""


class QCurveError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(QCurveError, ValueError):
    """An argument is outside the domain of an operation, e.g. an unstable (g, n)."""


class InsufficientTruncationError(QCurveError, ValueError):
    """A coefficient was requested beyond the truncation order of a series."""


class NormalizationError(QCurveError, ValueError):
    """A formal log/exp was applied to a series whose leading term is not the expected unit."""


class InternalConsistencyError(QCurveError, ArithmeticError):
    """A structural invariant failed during a computation; the result cannot be trusted."""


class CacheCorruptionError(InternalConsistencyError):
    """A persisted cache entry failed validation."""


class DependencyError(QCurveError, LookupError):
    """A check needed an object that is neither cached nor computable."""
