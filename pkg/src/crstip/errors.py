"""Error types shared across the package.

Every error carries a stable machine-readable ``code`` so CLI and HTTP
layers can surface it without string matching on messages.
"""

from __future__ import annotations


class CrstipError(Exception):
    """Base class for all errors raised by this package."""

    code = "ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class UnknownArea(CrstipError):
    code = "UNKNOWN_AREA"


class UnknownAreaLevel(CrstipError):
    code = "UNKNOWN_AREA_LEVEL"


class UnknownIndicator(CrstipError):
    code = "UNKNOWN_INDICATOR"


class InvalidScheme(CrstipError):
    code = "INVALID_SCHEME"


class InconsistentProfile(CrstipError):
    code = "INCONSISTENT_PROFILE"


class SchemeMismatch(CrstipError):
    code = "SCHEME_MISMATCH"


class ValidationError(CrstipError):
    """A request or value failed validation before reaching the engine."""

    code = "VALIDATION"


class NotFound(CrstipError):
    code = "NOT_FOUND"


class IoFailure(CrstipError):
    code = "IO_FAILURE"


class CorruptDocument(CrstipError):
    code = "CORRUPT_DOCUMENT"


class InvalidSpec(CrstipError):
    code = "INVALID_SPEC"
