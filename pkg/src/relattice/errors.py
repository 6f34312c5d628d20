"""Shared exception types.

Everything raised on purpose by this package derives from RelatticeError,
so callers (and the command line front end) can catch one base class.
"""

from __future__ import annotations


class RelatticeError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(RelatticeError):
    """Malformed universe or relation data (bad header, value, or shape)."""


class UniverseMismatchError(RelatticeError):
    """Two operands carry different universes."""


class UniverseRequiredError(RelatticeError):
    """An operation needs a universe (R10, R11, or the derived OR) but none was given."""


class ParseError(RelatticeError):
    """Term or statement text could not be parsed."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class UnboundNameError(RelatticeError):
    """A term mentions a name the environment does not bind."""

    def __init__(self, names):
        names = tuple(names)
        super().__init__("unbound name(s): " + ", ".join(names))
        self.names = names


class ClosureCapError(RelatticeError):
    """Closure generation exceeded the element cap."""

    def __init__(self, cap: int, message: str | None = None):
        super().__init__(message or f"closure exceeded the element cap of {cap}")
        self.cap = cap


class SearchSpaceError(RelatticeError):
    """An exhaustive search was asked to cover too large a space."""


class ConstraintViolationError(RelatticeError):
    """Declared constraints do not hold for the supplied relations."""

    def __init__(self, violations):
        violations = tuple(violations)
        super().__init__("constraint violation(s): " + "; ".join(violations))
        self.violations = violations


class UnsatisfiableConstraintsError(RelatticeError):
    """No instance generator exists for the declared constraints."""


class RewriteVerificationError(RelatticeError):
    """A rewrite step failed its randomized equivalence check."""
