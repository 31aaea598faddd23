"""Error handling for nctorus using Pydantic.

This module defines the NcgError and NcgException classes used by every computation in the toolkit.
Errors carry a machine readable code plus free-form context describing the offending input.
"""

from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, Field


class ErrorCode(str, Enum):
    """Error codes raised by the toolkit."""

    THETA_MISMATCH = "THETA_MISMATCH"
    REAL_TAU = "REAL_TAU"
    GUARD_TOO_SMALL = "GUARD_TOO_SMALL"
    WINDOW_MISMATCH = "WINDOW_MISMATCH"
    NONZERO_THETA = "NONZERO_THETA"
    CAP_EXCEEDED = "CAP_EXCEEDED"
    NOT_LINEAR = "NOT_LINEAR"
    STREAM_TOO_SHORT = "STREAM_TOO_SHORT"
    RESOLUTION = "RESOLUTION"
    CONFIG_INVALID = "CONFIG_INVALID"
    UNKNOWN_CHECK = "UNKNOWN_CHECK"


class NcgError(BaseModel):
    """Error container using Pydantic."""

    error_code: Optional[str] = Field(default=None)
    error_message: Optional[str] = Field(default=None)
    context: Optional[dict[str, Any]] = Field(default=None)

    def __str__(self) -> str:
        parts = []
        if self.error_code:
            parts.append(f"Error Code: {self.error_code}")
        if self.error_message:
            parts.append(f"Message: {self.error_message}")
        if self.context:
            rendered = ", ".join(f"{k}={v}" for k, v in sorted(self.context.items()))
            parts.append(f"Context: {rendered}")
        if not parts:
            parts.append("Unknown nctorus error")
        return " | ".join(parts)


class NcgException(Exception):
    """Exception raised by toolkit operations."""

    def __init__(self, error: NcgError):
        """Initialize the NcgException with an NcgError."""
        self.error = error
        super().__init__(str(error))

    @property
    def error_code(self) -> Optional[str]:
        """Returns the error code of the wrapped error."""
        return self.error.error_code

    @property
    def context(self) -> dict[str, Any]:
        """Returns the context of the wrapped error."""
        return self.error.context or {}
