"""Exception hierarchy shared by every opcost module."""

from __future__ import annotations


class OpcostError(Exception):
    """Base class for all errors raised by opcost."""


class InvalidArgumentError(OpcostError, ValueError):
    """A caller passed a value outside an operation's domain."""


class ValidationError(OpcostError, ValueError):
    """A cost table, profile or configuration violates its invariants."""


class ParseError(OpcostError):
    """Source text or a structured document could not be parsed.

    ``path`` and ``line`` are filled in when known so that callers can point
    the user at the offending location.
    """

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = path if line is None else f"{path}:{line}"
        elif line is not None:
            location = f"line {line}"
        super().__init__(f"{location}: {message}" if location else message)
        self.message = message


class UndefinedCorrelationError(OpcostError, ArithmeticError):
    """A rank correlation is undefined because one input has no rank variance."""
