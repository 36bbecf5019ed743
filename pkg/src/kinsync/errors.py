"""Exception types shared across the package."""

from __future__ import annotations


class KinsyncError(Exception):
    """Base class for errors raised by this package."""


class ParseError(KinsyncError):
    """A text input could not be parsed.

    Carries the offending path and, when known, the 1-based line number.
    """

    def __init__(self, path, message, lineno=None):
        self.path = str(path)
        self.lineno = lineno
        where = f"{self.path}:{lineno}" if lineno is not None else self.path
        super().__init__(f"{where}: {message}")


class RenderError(KinsyncError):
    """Video rendering failed (missing encoder, bad input, encoder error)."""
