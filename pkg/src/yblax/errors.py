"""Exception hierarchy shared by all modules.

Every failure mode raised by the library derives from YBLaxError so callers
can catch one base class. Degeneracy errors carry the offending value where
that helps diagnosis.
"""


class YBLaxError(Exception):
    """Base class for all library errors."""


class ConfigError(YBLaxError):
    """Invalid or inconsistent run configuration."""


class SingularMatrix(YBLaxError):
    """Matrix inversion requested below the singularity threshold."""


class SingularParameter(YBLaxError):
    """Parameter family evaluated where its determinant condition fails."""


class NonCommuting(YBLaxError):
    """The two leading matrices of a re-factorization do not commute."""


class DegeneratePi(YBLaxError):
    """The 2x2 re-factorization denominator matrix is singular."""


class DegenerateDenominator(YBLaxError):
    """The general re-factorization denominator matrix is singular."""


class DegenerateSimilarity(YBLaxError):
    """The similarity criterion's pivot matrix is singular."""


class ToleranceExceeded(YBLaxError):
    """A constructed result failed its own residual checks."""


class StepTooLarge(YBLaxError):
    """Finite-difference residual is unstable under step halving."""


class DomainError(YBLaxError):
    """Input outside an embedding's domain (zero denominator)."""


class PoleError(YBLaxError):
    """Closed-form map evaluated at a pole."""


class BranchCut(YBLaxError):
    """Square-root argument on the principal branch cut."""


class PoleEncountered(YBLaxError):
    """Transfer evolution hit a pole; carries the failing step index."""

    def __init__(self, step, message=""):
        self.step = step
        super().__init__(message or f"pole encountered at step {step}")
