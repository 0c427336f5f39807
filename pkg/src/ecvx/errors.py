"""Exception types shared across the package."""

from __future__ import annotations


class EcvxError(Exception):
    """Base class for all package-specific errors."""


class EmptyDomain(EcvxError):
    """An operation that needs a nonempty set was handed an empty one."""


class ImproperResult(EcvxError):
    """A function combination produced an identically +inf (empty-domain) result."""


class NoMinorant(EcvxError):
    """A function admits no e-affine minorant (its conjugate is improper)."""


class ImproperEnvelope(EcvxError):
    """An epigraph-set envelope is identically +inf or -inf where that is not allowed."""


class OutOfDomain(EcvxError):
    """A pointwise query was made outside the function's effective domain."""


class InvalidProblem(EcvxError):
    """Problem data violates a load-time contract (non-convex part, empty domain, ...)."""


class ProblemParseError(EcvxError):
    """A problem file could not be parsed.

    ``where`` carries either a JSON line/column pair or a key path into the document.
    """

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(message if where is None else f"{message} (at {where})")


class UnknownExample(EcvxError):
    """An unknown reproduction id was requested."""
