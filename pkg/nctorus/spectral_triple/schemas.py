"""This module defines schemas for the truncated torus spectral triple.

It includes the GNS window with its guard band, GNS and spinor vectors, Dirac parameters,
and the estimate models returned by norm and seminorm computations.
"""

from functools import lru_cache
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from nctorus.errors import ErrorCode, NcgError, NcgException
from nctorus.torus_algebra import AlgebraElement, DeformationAngle


@lru_cache(maxsize=64)
def _window_basis(radius: int) -> tuple[np.ndarray, np.ndarray]:
    side = 2 * radius + 1
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    r = np.repeat(axis, side)
    s = np.tile(axis, side)
    r.setflags(write=False)
    s.setflags(write=False)
    return r, s


class GnsWindow(BaseModel):
    """Truncation {w(r,s) : max(|r|,|s|) <= radius} with an interior guard band.

    Attributes:
        radius: Truncation radius N.
        guard: Guard width g; guarded checks act on vectors of radius N - g.
    """

    radius: int = Field(..., description="Truncation radius N.")
    guard: int = Field(default=0, description="Guard width g.")

    model_config = ConfigDict(
        frozen=True, json_schema_extra={"example": {"radius": 32, "guard": 8}}
    )

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate radius positivity and the guard range."""
        if not isinstance(values, dict):
            return values
        cls._validate_radius(values)
        cls._validate_guard(values)
        return values

    @classmethod
    def _validate_radius(cls, values):
        radius = values.get("radius")
        if not isinstance(radius, (int, np.integer)) or radius < 1:
            raise ValueError(f"radius must be a positive integer, got '{radius}'")
        return values

    @classmethod
    def _validate_guard(cls, values):
        guard = values.get("guard", 0)
        if not isinstance(guard, (int, np.integer)) or guard < 0:
            raise ValueError(f"guard must be a nonnegative integer, got '{guard}'")
        if guard > values["radius"]:
            raise ValueError("guard must not exceed the window radius")
        return values

    @property
    def side(self) -> int:
        """Number of exponents per axis, 2N + 1."""
        return 2 * self.radius + 1

    @property
    def dimension(self) -> int:
        """Dimension (2N + 1)^2 of the truncated GNS space."""
        return self.side**2

    @property
    def interior_radius(self) -> int:
        """Radius N - g of the guarded subspace."""
        return self.radius - self.guard

    def basis(self) -> tuple[np.ndarray, np.ndarray]:
        """Exponent arrays (r, s) in storage order."""
        return _window_basis(self.radius)

    def flat_index(self, r: np.ndarray, s: np.ndarray) -> np.ndarray:
        """Storage positions of monomials, -1 for monomials outside the window."""
        r = np.asarray(r, dtype=np.int64)
        s = np.asarray(s, dtype=np.int64)
        inside = (np.abs(r) <= self.radius) & (np.abs(s) <= self.radius)
        index = (r + self.radius) * self.side + (s + self.radius)
        return np.where(inside, index, -1)

    def mask(self, radius: Optional[int] = None) -> np.ndarray:
        """Boolean mask of basis vectors with max(|r|,|s|) <= radius."""
        radius = self.interior_radius if radius is None else radius
        r, s = self.basis()
        return (np.abs(r) <= radius) & (np.abs(s) <= radius)

    def require_guard(self, support: int, operation: str) -> None:
        """Raise GUARD_TOO_SMALL when an algebra support exceeds the guard."""
        if support > self.guard:
            raise NcgException(
                NcgError(
                    error_code=ErrorCode.GUARD_TOO_SMALL,
                    error_message=f"{operation} needs a guard of at least {support}.",
                    context={"guard": self.guard, "support": support},
                )
            )

    def enlarged(self, factor: float) -> "GnsWindow":
        """A larger window with the same guard."""
        return GnsWindow(radius=int(np.ceil(self.radius * factor)), guard=self.guard)


class GnsVector(BaseModel):
    """Vector of the truncated GNS space L^2(A_theta, tau_0)."""

    window: GnsWindow
    angle: DeformationAngle
    coefficients: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @classmethod
    def from_element(cls, window: GnsWindow, a: AlgebraElement) -> "GnsVector":
        """Image of an algebra element, which must fit in the window."""
        positions = window.flat_index(a.r, a.s)
        if np.any(positions < 0):
            raise NcgException(
                NcgError(
                    error_code=ErrorCode.WINDOW_MISMATCH,
                    error_message="Element support exceeds the window.",
                    context={"radius": window.radius, "support": a.support_radius},
                )
            )
        coefficients = np.zeros(window.dimension, dtype=np.complex128)
        coefficients[positions] = a.amplitudes
        return cls(window=window, angle=a.angle, coefficients=coefficients)

    def to_element(self) -> AlgebraElement:
        """Coefficient carrier as an algebra element."""
        r, s = self.window.basis()
        return AlgebraElement.build(self.angle, r, s, self.coefficients)

    def inner(self, other: "GnsVector") -> complex:
        """GNS inner product, conjugate-linear in self."""
        return complex(np.vdot(self.coefficients, other.coefficients))


class SpinorVector(BaseModel):
    """Element of a direct sum of copies of the truncated GNS space.

    The spinor space H = L^2 + L^2 uses two blocks; the spaces carrying the
    higher representations use 2^(s+1) blocks.
    """

    window: GnsWindow
    angle: DeformationAngle
    components: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate the block layout."""
        if not isinstance(values, dict):
            return values
        values = dict(values)
        cls._validate_components(values)
        return values

    @classmethod
    def _validate_components(cls, values):
        window = values["window"]
        components = np.asarray(values["components"], dtype=np.complex128)
        if components.ndim != 2 or components.shape[1] != window.dimension:
            raise ValueError(
                f"components must have shape (blocks, {window.dimension}), got {components.shape}"
            )
        if components.shape[0] % 2:
            raise ValueError("a spinor vector needs an even number of blocks")
        values["components"] = components
        return values

    @classmethod
    def from_parts(cls, psi1: GnsVector, psi2: GnsVector) -> "SpinorVector":
        """Pair two GNS vectors on the same window."""
        if psi1.window != psi2.window or psi1.angle != psi2.angle:
            raise NcgException(
                NcgError(
                    error_code=ErrorCode.WINDOW_MISMATCH,
                    error_message="Spinor components must share window and angle.",
                )
            )
        return cls(
            window=psi1.window,
            angle=psi1.angle,
            components=np.stack([psi1.coefficients, psi2.coefficients]),
        )

    @classmethod
    def zeros(
        cls, window: GnsWindow, angle: DeformationAngle, blocks: int = 2
    ) -> "SpinorVector":
        """The zero vector."""
        return cls(
            window=window,
            angle=angle,
            components=np.zeros((blocks, window.dimension), dtype=np.complex128),
        )

    @property
    def blocks(self) -> int:
        """Number of GNS copies."""
        return int(self.components.shape[0])

    @property
    def psi1(self) -> GnsVector:
        """First spinor component."""
        return GnsVector(window=self.window, angle=self.angle, coefficients=self.components[0])

    @property
    def psi2(self) -> GnsVector:
        """Second spinor component."""
        return GnsVector(window=self.window, angle=self.angle, coefficients=self.components[1])

    def with_components(self, components: np.ndarray) -> "SpinorVector":
        """Same window and angle, new coefficients."""
        return SpinorVector.model_construct(
            window=self.window, angle=self.angle, components=components
        )

    def inner(self, other: "SpinorVector") -> complex:
        """Hilbert inner product, conjugate-linear in self."""
        return complex(np.vdot(self.components, other.components))

    def norm(self) -> float:
        """Hilbert norm."""
        return float(np.linalg.norm(self.components))


class DiracParams(BaseModel):
    """Parameters of the (covering) Dirac operator.

    Attributes:
        tau_re: Real part of tau.
        tau_im: Imaginary part of tau, nonzero.
        angle: Deformation angle of the represented algebra.
        m: Scaling of the first derivation (1 on the base triple).
        n: Scaling of the second derivation (1 on the base triple).
    """

    tau_re: float = Field(default=0.0, description="Re(tau).")
    tau_im: float = Field(default=1.0, description="Im(tau), nonzero.")
    angle: DeformationAngle = Field(default_factory=lambda: DeformationAngle(base=0.0))
    m: int = Field(default=1, description="First derivation scaling.")
    n: int = Field(default=1, description="Second derivation scaling.")

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {"tau_re": 0.5, "tau_im": 1.0, "angle": {"base": 1.0}, "m": 2, "n": 3}
        },
    )

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate tau and the scaling."""
        if not isinstance(values, dict):
            return values
        cls._validate_tau(values)
        cls._validate_scaling(values)
        return values

    @classmethod
    def _validate_tau(cls, values):
        if float(values.get("tau_im", 1.0)) == 0.0:
            raise ValueError("tau must have nonzero imaginary part")
        return values

    @classmethod
    def _validate_scaling(cls, values):
        for key in ("m", "n"):
            if int(values.get(key, 1)) < 1:
                raise ValueError(f"{key} must be a positive integer")
        return values

    @classmethod
    def of(
        cls, tau: complex = 1j, theta: float | DeformationAngle = 0.0, m: int = 1, n: int = 1
    ) -> "DiracParams":
        """Build parameters from a complex tau and an angle."""
        tau = complex(tau)
        return cls(
            tau_re=tau.real,
            tau_im=tau.imag,
            angle=DeformationAngle.of(theta),
            m=m,
            n=n,
        )

    @property
    def tau(self) -> complex:
        """The modular parameter."""
        return complex(self.tau_re, self.tau_im)


class NormEstimate(BaseModel):
    """Power-iteration lower bound for the norm of an interior compression."""

    value: float = Field(..., description="Estimated operator norm.")
    converged: bool = Field(..., description="False when the iteration cap was hit.")
    iterations: int = Field(..., description="Iterations performed.")
    window: int = Field(..., description="Window radius.")
    interior_radius: int = Field(..., description="Radius of the compression subspace.")
    label: str = Field(default="", description="Operator label.")

    def __float__(self) -> float:
        return float(self.value)


class SeminormEstimate(BaseModel):
    """Regularity seminorm ||a||_s at two window sizes."""

    order: int = Field(..., description="Order s of the representation.")
    value: float = Field(..., description="Estimate at the base window.")
    enlarged_value: float = Field(..., description="Estimate at the enlarged window.")
    window: int = Field(..., description="Base window radius.")
    enlarged_window: int = Field(..., description="Enlarged window radius.")
    converged: bool = Field(..., description="All underlying estimates converged.")

    @property
    def growth(self) -> float:
        """Relative change between the two windows."""
        return abs(self.enlarged_value - self.value) / max(self.value, 1e-300)

    def is_window_stable(self, tolerance: float = 1e-6) -> bool:
        """True when the estimate did not move beyond tolerance."""
        return self.growth <= tolerance
