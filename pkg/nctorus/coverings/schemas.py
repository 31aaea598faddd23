"""This module defines schemas for finite coverings of the noncommutative torus.

It includes the covering parameters, elements of the deck group, towers of
coverings, finite prefixes of coherent sequences and inner-product trajectories.
"""

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

from nctorus.torus_algebra import AlgebraElement, DeformationAngle


class CoveringParams(BaseModel):
    """Finite covering A_theta -> A_theta' with theta' = (theta + 2 pi k) / (m n).

    Attributes:
        m: Order of the cover in the u-direction.
        n: Order of the cover in the v-direction.
        k: Winding added to the angle.
    """

    m: int = Field(..., description="Order in the u-direction.")
    n: int = Field(..., description="Order in the v-direction.")
    k: int = Field(default=0, description="Nonnegative winding.")

    model_config = ConfigDict(
        frozen=True, json_schema_extra={"example": {"m": 2, "n": 3, "k": 1}}
    )

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate positivity of the orders and the winding."""
        if not isinstance(values, dict):
            return values
        cls._validate_orders(values)
        return values

    @classmethod
    def _validate_orders(cls, values):
        for key in ("m", "n"):
            value = values.get(key)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValueError(f"{key} must be a positive integer, got '{value}'")
        k = values.get("k", 0)
        if isinstance(k, bool) or not isinstance(k, int) or k < 0:
            raise ValueError(f"k must be a nonnegative integer, got '{k}'")
        return values

    @property
    def group_order(self) -> int:
        """|G| = m n."""
        return self.m * self.n

    def is_trivial(self) -> bool:
        """True for the identity covering."""
        return self.m == 1 and self.n == 1


class GroupElement(BaseModel):
    """Deck transformation (p, q) in Z_m x Z_n."""

    p: int = Field(default=0, description="Residue mod m.")
    q: int = Field(default=0, description="Residue mod n.")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate that the residues are nonnegative."""
        if not isinstance(values, dict):
            return values
        for key in ("p", "q"):
            if int(values.get(key, 0)) < 0:
                raise ValueError(f"{key} must be a nonnegative residue")
        return values

    @classmethod
    def of(cls, p: int, q: int, c: CoveringParams) -> "GroupElement":
        """Reduce integers to residues of the covering group."""
        return cls(p=p % c.m, q=q % c.n)

    def is_identity(self) -> bool:
        """True for (0, 0)."""
        return self.p == 0 and self.q == 0

    def fits(self, c: CoveringParams) -> bool:
        """True when the residues are in range for the covering."""
        return self.p < c.m and self.q < c.n

    def plus(self, other: "GroupElement", c: CoveringParams) -> "GroupElement":
        """Group law of Z_m x Z_n."""
        return GroupElement.of(self.p + other.p, self.q + other.q, c)


class TowerSpec(BaseModel):
    """Tower A_theta_0 -> A_theta_1 -> ... where level l covers level l - 1.

    Attributes:
        theta0: Angle of the base algebra.
        levels: Covering parameters of each step.
    """

    theta0: DeformationAngle
    levels: list[CoveringParams] = Field(default_factory=list)

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "theta0": 1.0,
                "levels": [{"m": 2, "n": 1, "k": 0}, {"m": 1, "n": 2, "k": 1}],
            }
        },
    )

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Accept a plain float theta0 as in the JSON interchange format."""
        if not isinstance(values, dict):
            return values
        values = dict(values)
        theta0 = values.get("theta0")
        if theta0 is None:
            raise ValueError("theta0 is required")
        if not isinstance(theta0, (DeformationAngle, dict)):
            if isinstance(theta0, (str, bytes)):
                raise ValueError(f"theta0 must be numeric, got '{theta0}'")
            values["theta0"] = DeformationAngle.of(theta0)
        return values

    @property
    def depth(self) -> int:
        """Number of covering steps K."""
        return len(self.levels)

    def angle(self, level: int) -> DeformationAngle:
        """Angle theta_level, computed symbolically along the tower."""
        from .coverings import theta_prime

        angle = self.theta0
        for c in self.levels[:level]:
            angle = theta_prime(angle, c)
        return angle

    def cumulative_orders(self, level: int) -> tuple[int, int]:
        """(M_level, N_level), products of the orders up to the given level."""
        big_m, big_n = 1, 1
        for c in self.levels[:level]:
            big_m *= c.m
            big_n *= c.n
        return big_m, big_n

    def to_json_dict(self) -> dict[str, Any]:
        """Serialize to the tower interchange format."""
        return {
            "theta0": self.theta0.theta,
            "levels": [c.model_dump() for c in self.levels],
        }


class CoherentPrefix(BaseModel):
    """Finite prefix a_0, ..., a_K of a sequence along a tower, a_k at theta_k."""

    tower: TowerSpec
    elements: list[AlgebraElement]

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate the prefix length and the angle of every element."""
        if not isinstance(values, dict):
            return values
        tower, elements = values.get("tower"), values.get("elements", [])
        if not isinstance(tower, TowerSpec):
            tower = TowerSpec.model_validate(tower)
            values = {**values, "tower": tower}
        if len(elements) != tower.depth + 1:
            raise ValueError(
                f"prefix needs {tower.depth + 1} elements, got {len(elements)}"
            )
        for level, a in enumerate(elements):
            if a.angle != tower.angle(level):
                raise ValueError(f"element at level {level} has the wrong angle")
        return values

    @property
    def depth(self) -> int:
        """Depth K of the prefix."""
        return self.tower.depth


class InnerTrajectory(BaseModel):
    """Base-level inner products <a_k, b_k> along a prefix with a Cauchy diagnostic.

    Attributes:
        values: Inner product at each level, pulled back to theta_0.
        differences: Coefficient sup-norm of successive differences.
        normalization: "averaged" or "summed".
    """

    values: list[AlgebraElement]
    differences: list[float]
    normalization: str

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @property
    def spread(self) -> float:
        """Largest deviation of any level from level 0."""
        if not self.values:
            return 0.0
        return max(v.distance(self.values[0]) for v in self.values)

    def is_constant(self, tolerance: float = 1e-10) -> bool:
        """True when every level agrees with level 0 to tolerance."""
        return self.spread <= tolerance

