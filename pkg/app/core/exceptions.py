"""
Domain Exceptions

Every error raised by the q-series toolkit is a ValueError, so callers that
already guard numeric input with ``except ValueError`` keep working.
"""

from typing import Optional


class QSeriesError(ValueError):
    """Base class for all toolkit errors."""


class TruncationError(QSeriesError):
    """A request reaches beyond the exponents a series certifies."""

    def __init__(self, message: str, required: Optional[int] = None):
        super().__init__(message)
        self.required = required


class NonUnitError(QSeriesError):
    """Reciprocal requested for a series whose constant term is not a unit."""


class RegistryError(QSeriesError):
    """Unknown identity, conjecture or registry module id."""


class NoSignChangeError(QSeriesError):
    """Root bracketing found no sign change on the requested interval."""


class SpecParseError(QSeriesError):
    """
    Malformed theta / eta-product spec string.

    Attributes:
        text: The full input string
        position: 0-based offset of the first offending character
    """

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        self.reason = message
        super().__init__(self.render())

    def render(self) -> str:
        caret = " " * self.position + "^"
        return f"{self.reason} at position {self.position}\n  {self.text}\n  {caret}"
