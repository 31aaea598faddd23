"""Unit tests for NcgError and NcgException classes.

This module tests the error handling functionality of nctorus using Pydantic for validation and serialization.
"""

import pytest

from nctorus.errors import ErrorCode, NcgError, NcgException


def test_ncg_error_str_full_fields():
    """Test that NcgError string representation includes all fields."""
    error = NcgError(
        error_code="GUARD_TOO_SMALL",
        error_message="Guard too small.",
        context={"needed": 6, "guard": 3},
    )
    s = str(error)
    assert "Error Code: GUARD_TOO_SMALL" in s
    assert "Message: Guard too small." in s
    assert "Context: guard=3, needed=6" in s


def test_ncg_error_str_partial_fields():
    """Test that NcgError string representation handles missing fields."""
    s = str(NcgError(error_code="REAL_TAU"))
    assert "Error Code: REAL_TAU" in s
    assert "Message:" not in s
    assert "Context:" not in s


def test_ncg_error_str_no_fields():
    """Test that NcgError string representation handles no fields."""
    assert str(NcgError()) == "Unknown nctorus error"


def test_ncg_exception_message_and_properties():
    """Test that NcgException wraps NcgError and exposes its properties."""
    error = NcgError(error_code=ErrorCode.CAP_EXCEEDED, context={"s": 5})
    exc = NcgException(error)
    assert isinstance(exc, Exception)
    assert exc.error is error
    assert exc.error_code == "CAP_EXCEEDED"
    assert exc.context == {"s": 5}
    assert str(exc) == str(error)


def test_ncg_exception_with_minimal_error():
    """Test NcgException with a minimal NcgError."""
    exc = NcgException(NcgError())
    assert exc.error_code is None
    assert exc.context == {}
    assert str(exc) == "Unknown nctorus error"


def test_error_code_is_matchable():
    """Test that pytest.raises(match=...) can select on the code."""
    with pytest.raises(NcgException, match="STREAM_TOO_SHORT"):
        raise NcgException(NcgError(error_code=ErrorCode.STREAM_TOO_SHORT))
