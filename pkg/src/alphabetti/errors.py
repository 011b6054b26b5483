"""Exception types shared across the package."""


class AlphabettiError(Exception):
    """Base class for all package errors."""


class DegenerateSimplexError(AlphabettiError, ValueError):
    """Simplex vertices are affinely dependent (flat simplex)."""


class DegenerateInputError(AlphabettiError, ValueError):
    """Point set is degenerate (e.g. all points on a common hyperplane)."""


class PeriodicIntegrityError(AlphabettiError, RuntimeError):
    """Canonical periodic complex failed a topological integrity check.

    Carries the failed count comparison in ``details``.
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = dict(details or {})


class MonotonicityError(AlphabettiError, RuntimeError):
    """Alpha-threshold ordering violated face-before-coface monotonicity."""


class QuadratureError(AlphabettiError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class AsymptoticsMismatchError(AlphabettiError, RuntimeError):
    """Independent evaluation routes of an asymptotic constant disagree."""


class WindowError(AlphabettiError, ValueError):
    """A fitting window contains unusable (nonpositive) data."""


class PointFileError(AlphabettiError, ValueError):
    """Point file could not be parsed; carries the offending line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
