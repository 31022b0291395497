"""Error hierarchy for the factorization engine.

Every failure an operation can report is a subclass of ``FactorizationError``
and carries the process exit code the CLI maps it to.
"""

from typing import Any, Optional


class FactorizationError(Exception):
    """Base class for all engine errors."""

    exit_code = 1

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{key}={value}" for key, value in self.context.items())
        return f"{self.message} ({details})"


class ValidationError(FactorizationError):
    """An input or precondition invariant does not hold."""

    exit_code = 2


class Unbounded(ValidationError):
    """The half-space system has a nontrivial recession cone."""


class DegeneratePolytope(ValidationError):
    """The polytope is not full-dimensional in its ambient space."""


class NotSimplicial(ValidationError):
    """A cone or fan is required to be simplicial but is not."""


class NotRefinement(ValidationError):
    """The source fan does not refine the target fan."""


class NotCartier(ValidationError):
    """The support function of a divisor is not linear on some cone."""


class EmptySlice(ValidationError):
    """A parameter slice of the master polytope is empty."""


class WallParameter(ValidationError):
    """A stability certificate was requested at a wall."""


class SearchExhausted(FactorizationError):
    """A bounded search ran out of candidates."""

    exit_code = 3


class InternalInconsistency(FactorizationError):
    """Two computations that must agree did not."""

    exit_code = 1


class ChamberInconsistent(InternalInconsistency):
    """Quotient fans are not constant inside a chamber."""


class OracleMismatch(InternalInconsistency):
    """Independent oracles disagree."""


class NotElementary(InternalInconsistency):
    """A wall crossing does not decompose into star subdivisions."""


class NotStar(FactorizationError):
    """A fan pair is not a single star subdivision."""


class CertificateMismatch(FactorizationError):
    """A report claim failed re-derivation."""

    exit_code = 4

    def __init__(self, path: str, expected: Optional[Any] = None, found: Optional[Any] = None):
        super().__init__(f"certificate mismatch at {path}", expected=expected, found=found)
        self.path = path


class IoError(FactorizationError):
    """Writing an output file failed."""
