"""This module defines schemas for singular value streams and Dixmier-type estimates.

It includes the nonincreasing stream of singular values of a compact operator, the
Cesaro mean with its quadrature error and the extrapolated noncommutative integral.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class SingularValueStream(BaseModel):
    """Nonincreasing nonnegative singular values mu_1 >= mu_2 >= ... of an operator.

    A finite-rank stream is complete: every value past the stored ones is zero.
    A truncated stream only knows its stored prefix, so functionals that reach past
    it fail with STREAM_TOO_SHORT.

    Attributes:
        values: Stored singular values.
        provenance: Where the values come from.
        finite_rank: True when the stored values are all nonzero singular values.
    """

    values: np.ndarray
    provenance: str = Field(default="explicit", description="Origin of the stream.")
    finite_rank: bool = Field(default=True, description="Zeros past the stored values.")

    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        json_schema_extra={
            "example": {"values": [3.0, 2.0, 1.0], "provenance": "explicit", "finite_rank": True}
        },
    )

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate the ordering and sign of the singular values."""
        if not isinstance(values, dict):
            return values
        values = dict(values)
        cls._validate_values(values)
        return values

    @classmethod
    def _validate_values(cls, values):
        raw = np.asarray(values.get("values", []), dtype=np.float64)
        if raw.ndim != 1:
            raise ValueError("values must be a 1-D array")
        if not np.all(np.isfinite(raw)):
            raise ValueError("values must be finite")
        if np.any(raw < 0):
            raise ValueError("singular values must be nonnegative")
        if np.any(np.diff(raw) > 0):
            raise ValueError("singular values must be nonincreasing")
        values["values"] = raw
        return values

    @classmethod
    def from_diagonal(cls, entries, provenance: str = "diagonal") -> "SingularValueStream":
        """Singular values of a diagonal operator with the given entries."""
        magnitudes = np.sort(np.abs(np.asarray(entries, dtype=np.complex128)))[::-1]
        return cls(values=magnitudes.astype(np.float64), provenance=provenance)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def norm(self) -> float:
        """Operator norm mu_1, zero for the empty stream."""
        return float(self.values[0]) if self.values.size else 0.0

    def head(self, count: int) -> "SingularValueStream":
        """The first ``count`` values as a truncated stream."""
        return self.model_copy(
            update={
                "values": self.values[:count],
                "finite_rank": self.finite_rank and count >= self.values.size,
            }
        )


class QuadratureEstimate(BaseModel):
    """Cesaro mean tau_lambda with the estimated quadrature error."""

    value: float = Field(..., description="tau_lambda(T).")
    error: float = Field(..., description="Richardson estimate of the trapezoid error.")
    at: float = Field(..., description="The parameter lambda.")
    nodes: int = Field(..., description="Quadrature nodes in log u.")

    def __float__(self) -> float:
        return float(self.value)


class DixmierEstimate(BaseModel):
    """Noncommutative integral extrapolated from tau_lambda over the upper decade.

    The fit model is c + (b + b' log log lambda) / log lambda and the reported value
    is c.

    Attributes:
        value: The extrapolated limit c.
        fit_b: Coefficient b of 1 / log lambda.
        fit_b_loglog: Coefficient b' of log log lambda / log lambda.
        fit_residual: Largest absolute deviation of tau_lambda from the fit.
        lambda_min: Lower end of the fitted range.
        lambda_max: Upper end of the fitted range.
        tau_at_max: tau_lambda at lambda_max.
        quadrature_error: Largest quadrature error over the fitted range.
        provenance: Provenance of the stream.
    """

    value: float
    fit_b: float
    fit_b_loglog: float = 0.0
    fit_residual: float
    lambda_min: float
    lambda_max: float
    tau_at_max: float = 0.0
    quadrature_error: float = 0.0
    provenance: str = ""

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "value": 0.1591,
                "fit_b": -0.02,
                "fit_residual": 2e-7,
                "lambda_max": 1e6,
            }
        }
    )

    def to_json_dict(self) -> dict:
        """Serialize in the estimate interchange format."""
        return {
            "value": self.value,
            "fit_b": self.fit_b,
            "fit_residual": self.fit_residual,
            "lambda_max": self.lambda_max,
        }
