"""Shared report schema for every verification in the toolkit."""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class AxiomReport(BaseModel):
    """Outcome of a single identity check.

    Attributes:
        axiom: Name of the identity that was checked.
        residual: Measured deviation, nonnegative.
        tolerance: Threshold the residual is compared against.
        passed: True exactly when residual <= tolerance.
        window: Truncation radius used, when the check is windowed.
        guard: Interior margin used, when the check is windowed.
        components: Named sub-residuals contributing to the residual.
        notes: Free-form remarks such as the normalization used.
    """

    axiom: str = Field(..., description="Name of the checked identity.")
    residual: float = Field(..., description="Measured deviation.")
    tolerance: float = Field(..., description="Pass threshold.")
    passed: bool = Field(default=False, alias="pass", description="Outcome.")
    window: Optional[int] = Field(default=None, description="Window radius.")
    guard: Optional[int] = Field(default=None, description="Guard width.")
    components: dict[str, float] = Field(default_factory=dict)
    notes: list[str] = Field(default_factory=list)

    model_config = ConfigDict(
        populate_by_name=True,
        json_schema_extra={
            "example": {
                "axiom": "first-order",
                "residual": 3.1e-15,
                "tolerance": 1e-12,
                "pass": True,
                "window": 32,
                "guard": 8,
            }
        },
    )

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate the residual and derive the pass flag."""
        values = dict(values)
        cls._validate_residual(values)
        cls._derive_pass(values)
        return values

    @classmethod
    def _validate_residual(cls, values):
        residual = values.get("residual")
        if residual is None or residual != residual or residual < 0:
            raise ValueError(f"residual must be a nonnegative number, got '{residual}'")
        tolerance = values.get("tolerance")
        if tolerance is None or tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got '{tolerance}'")
        return values

    @classmethod
    def _derive_pass(cls, values):
        values["residual"] = float(values["residual"])
        values["pass"] = bool(values["residual"] <= values["tolerance"])
        values.pop("passed", None)
        return values

    def to_json_dict(self) -> dict:
        """Serialize in the shared report format."""
        return self.model_dump(by_alias=True, exclude_none=True)


def merge_reports(
    axiom: str,
    labelled: dict[str, AxiomReport],
    tolerance: float,
    notes: Optional[list[str]] = None,
) -> AxiomReport:
    """Fold several reports of one identity into a single worst-case report.

    Each input contributes its residual as a component under its label; failing
    labels are listed in the notes.
    """
    components = {label: report.residual for label, report in labelled.items()}
    first = next(iter(labelled.values()), None)
    failing = [label for label, r in components.items() if r > tolerance]
    return AxiomReport(
        axiom=axiom,
        residual=max(components.values(), default=0.0),
        tolerance=tolerance,
        window=first.window if first else None,
        guard=first.guard if first else None,
        components=components,
        notes=list(notes or []) + [f"{label} fails" for label in failing],
    )
