"""Error taxonomy shared across the framework.

Every error carries a stable machine code so the HTTP gateway and the CLI
can map failures to responses without string-matching messages.
"""

from __future__ import annotations


class PlumberError(Exception):
    """Base class for all framework errors."""

    code = "internal_error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class InvalidValue(PlumberError):
    """A domain value violates one of its invariants."""

    code = "invalid_value"


class DocumentTooLarge(PlumberError):
    code = "document_too_large"
