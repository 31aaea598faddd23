"""This module defines schemas for the truncated noncommutative torus.

It includes the deformation angle with its exact covering form, the monomial basis label,
and the finitely supported algebra element used throughout the toolkit.
"""

import math
from typing import Any, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

ZERO_FLOOR = 1e-300
TWO_PI = 2.0 * math.pi


class DeformationAngle(BaseModel):
    """Deformation angle theta = (base + 2*pi*winding) / denominator, in radians.

    The relation implemented is uv = e^{i theta} vu. Covering angles
    (theta + 2*pi*k)/(mn) keep their integer part symbolic so that phases
    e^{-i theta N} are reduced with integer arithmetic before evaluation.
    """

    base: float = Field(..., description="Real part of the numerator, radians.")
    winding: int = Field(default=0, description="Multiple of 2*pi in the numerator.")
    denominator: int = Field(default=1, description="Positive integer denominator.")

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"base": 1.0, "winding": 1, "denominator": 6}},
    )

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate finiteness of the base and positivity of the denominator."""
        if not isinstance(values, dict):
            return values
        cls._validate_base(values)
        cls._validate_denominator(values)
        return values

    @classmethod
    def _validate_base(cls, values):
        base = values.get("base")
        if isinstance(base, (str, bytes)):
            raise ValueError(f"theta must be numeric, got '{base}'")
        if base is None or not math.isfinite(float(base)):
            raise ValueError(f"theta must be a finite real number, got '{base}'")
        return values

    @classmethod
    def _validate_denominator(cls, values):
        denominator = values.get("denominator", 1)
        if int(denominator) < 1:
            raise ValueError(f"denominator must be positive, got '{denominator}'")
        return values

    @classmethod
    def of(cls, theta: Union[float, "DeformationAngle"]) -> "DeformationAngle":
        """Coerce a float (or an existing angle) into a DeformationAngle."""
        if isinstance(theta, DeformationAngle):
            return theta
        return cls(base=float(theta))

    @property
    def theta(self) -> float:
        """Numerical value of the angle in radians."""
        return (self.base + TWO_PI * self.winding) / self.denominator

    def is_commutative(self) -> bool:
        """True when the angle is exactly zero (commutative model)."""
        return self.base == 0.0 and self.winding % self.denominator == 0

    def twist(self, exponent: Any) -> np.ndarray:
        """Evaluate e^{-i theta N} for integer exponents N.

        Both parts of theta*N are reduced to lowest terms first, so equal
        rational multiples of the base and of 2*pi evaluate identically
        whatever representation produced them.
        """
        n = np.asarray(exponent, dtype=np.int64)
        d = self.denominator
        g = np.gcd(n, d)
        phase = self.base * (n // g) / (d // g)
        if self.winding:
            j = (self.winding * n) % d
            gj = np.gcd(j, d)
            jr, dr = j // gj, d // gj
            jr = np.where(2 * jr > dr, jr - dr, jr)
            phase = phase + TWO_PI * jr / dr
        return np.exp(-1j * np.asarray(phase, dtype=np.float64))

    def twist_key(self, exponent: int) -> tuple[float, int, int, int, int]:
        """Reduced symbolic form of theta*N used for exact phase comparisons.

        Returns:
            (base, base numerator, base denominator, turn numerator, turn denominator)
            so that theta*N = base*num/den + 2*pi*turn_num/turn_den.
        """
        n = int(exponent)
        d = self.denominator
        g = math.gcd(n, d)
        j = (self.winding * n) % d
        gj = math.gcd(j, d)
        jr, dr = j // gj, d // gj
        if 2 * jr > dr:
            jr -= dr
        return (self.base, n // g, d // g, jr, dr)


class Monomial(BaseModel):
    """Label (r, s) of the normal-ordered basis word u^r v^s."""

    r: int = Field(..., description="Exponent of u.")
    s: int = Field(..., description="Exponent of v.")

    model_config = ConfigDict(frozen=True)

    @property
    def radius(self) -> int:
        """Support radius max(|r|, |s|)."""
        return max(abs(self.r), abs(self.s))


def _canonical_arrays(
    r: np.ndarray, s: np.ndarray, amplitudes: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Sort, merge duplicate monomials and drop zero amplitudes."""
    if r.size == 0:
        return np.zeros((0, 2), dtype=np.int64), np.zeros(0, dtype=np.complex128)
    keys = np.stack([r.astype(np.int64), s.astype(np.int64)], axis=1)
    unique, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    re = np.bincount(inverse, weights=amplitudes.real, minlength=len(unique))
    im = np.bincount(inverse, weights=amplitudes.imag, minlength=len(unique))
    total = re + 1j * im
    keep = np.abs(total) >= ZERO_FLOOR
    return unique[keep], total[keep]


class AlgebraElement(BaseModel):
    """Finite twisted Laurent series sum a_rs u^r v^s in canonical form.

    Attributes:
        angle: Deformation angle of the ambient algebra.
        indices: (k, 2) integer array of monomials, sorted lexicographically, no repeats.
        amplitudes: (k,) complex array, no stored zeros.
    """

    angle: DeformationAngle
    indices: np.ndarray
    amplitudes: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Bring user supplied terms into canonical form."""
        if not isinstance(values, dict):
            return values
        values = dict(values)
        cls._validate_angle(values)
        cls._canonicalize(values)
        return values

    @classmethod
    def _validate_angle(cls, values):
        angle = values.get("angle")
        if angle is None:
            raise ValueError("angle is required")
        if not isinstance(angle, DeformationAngle) and not isinstance(angle, dict):
            values["angle"] = DeformationAngle.of(angle)
        return values

    @classmethod
    def _canonicalize(cls, values):
        indices = np.asarray(values.get("indices", np.zeros((0, 2))), dtype=np.int64)
        indices = indices.reshape(-1, 2)
        amplitudes = np.asarray(
            values.get("amplitudes", np.zeros(0)), dtype=np.complex128
        ).reshape(-1)
        if len(indices) != len(amplitudes):
            raise ValueError("indices and amplitudes must have equal length")
        if not np.all(np.isfinite(amplitudes)):
            raise ValueError("amplitudes must be finite")
        idx, amp = _canonical_arrays(indices[:, 0], indices[:, 1], amplitudes)
        idx.setflags(write=False)
        amp.setflags(write=False)
        values["indices"], values["amplitudes"] = idx, amp
        return values

    @classmethod
    def build(
        cls,
        angle: DeformationAngle,
        r: np.ndarray,
        s: np.ndarray,
        amplitudes: np.ndarray,
    ) -> "AlgebraElement":
        """Canonicalize raw (possibly repeated) terms without pydantic overhead."""
        idx, amp = _canonical_arrays(
            np.asarray(r, dtype=np.int64).reshape(-1),
            np.asarray(s, dtype=np.int64).reshape(-1),
            np.asarray(amplitudes, dtype=np.complex128).reshape(-1),
        )
        return cls._trusted(angle, idx, amp)

    @classmethod
    def _trusted(
        cls, angle: DeformationAngle, indices: np.ndarray, amplitudes: np.ndarray
    ) -> "AlgebraElement":
        indices.setflags(write=False)
        amplitudes.setflags(write=False)
        return cls.model_construct(angle=angle, indices=indices, amplitudes=amplitudes)

    @classmethod
    def from_terms(
        cls, angle: Union[float, DeformationAngle], terms: dict[tuple[int, int], complex]
    ) -> "AlgebraElement":
        """Build an element from a {(r, s): amplitude} mapping."""
        keys = list(terms.keys())
        r = np.array([k[0] for k in keys], dtype=np.int64)
        s = np.array([k[1] for k in keys], dtype=np.int64)
        amps = np.array([terms[k] for k in keys], dtype=np.complex128)
        return cls.build(DeformationAngle.of(angle), r, s, amps)

    @property
    def theta(self) -> float:
        """Numerical deformation angle."""
        return self.angle.theta

    @property
    def r(self) -> np.ndarray:
        """Exponents of u."""
        return self.indices[:, 0]

    @property
    def s(self) -> np.ndarray:
        """Exponents of v."""
        return self.indices[:, 1]

    @property
    def terms(self) -> dict[tuple[int, int], complex]:
        """Mapping from monomial to amplitude."""
        return {
            (int(r), int(s)): complex(a)
            for (r, s), a in zip(self.indices, self.amplitudes)
        }

    @property
    def support_radius(self) -> int:
        """max(|r|, |s|) over stored monomials, 0 for the zero element."""
        if len(self.indices) == 0:
            return 0
        return int(np.abs(self.indices).max())

    def is_zero(self) -> bool:
        """True when no amplitude is stored."""
        return len(self.amplitudes) == 0

    def coefficient(self, r: int, s: int) -> complex:
        """Amplitude of u^r v^s (0 when absent)."""
        hit = np.nonzero((self.indices[:, 0] == r) & (self.indices[:, 1] == s))[0]
        return complex(self.amplitudes[hit[0]]) if hit.size else 0j

    def sup_norm(self) -> float:
        """Largest coefficient modulus."""
        return float(np.abs(self.amplitudes).max()) if len(self.amplitudes) else 0.0

    def l1_norm(self) -> float:
        """Sum of coefficient moduli, an upper bound for the C*-norm."""
        return float(np.abs(self.amplitudes).sum())

    def l2_norm(self) -> float:
        """GNS norm sqrt(tau_0(a*a))."""
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def scale(self, c: complex) -> "AlgebraElement":
        """Multiply every amplitude by c."""
        return AlgebraElement.build(self.angle, self.r, self.s, self.amplitudes * c)

    def map_amplitudes(self, factor: np.ndarray) -> "AlgebraElement":
        """Multiply amplitudes by a per-term factor array."""
        return AlgebraElement.build(self.angle, self.r, self.s, self.amplitudes * factor)

    def to_json_dict(self) -> dict[str, Any]:
        """Serialize to the element interchange format."""
        return {
            "theta": self.theta,
            "angle": self.angle.model_dump(),
            "terms": [
                {"r": int(r), "s": int(s), "re": float(a.real), "im": float(a.imag)}
                for (r, s), a in zip(self.indices, self.amplitudes)
            ],
        }

    @classmethod
    def from_json_dict(cls, payload: dict[str, Any]) -> "AlgebraElement":
        """Parse the element interchange format."""
        if "angle" in payload:
            angle = DeformationAngle.model_validate(payload["angle"])
        else:
            angle = DeformationAngle.of(payload["theta"])
        terms = payload.get("terms", [])
        return cls(
            angle=angle,
            indices=np.array([[t["r"], t["s"]] for t in terms], dtype=np.int64),
            amplitudes=np.array(
                [complex(t.get("re", 0.0), t.get("im", 0.0)) for t in terms]
            ),
        )

    def _combine(self, other: "AlgebraElement", sign: float) -> "AlgebraElement":
        from .torus_algebra import ensure_same_angle

        ensure_same_angle(self, other)
        return AlgebraElement.build(
            self.angle,
            np.concatenate([self.r, other.r]),
            np.concatenate([self.s, other.s]),
            np.concatenate([self.amplitudes, sign * other.amplitudes]),
        )

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._combine(other, 1.0)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._combine(other, -1.0)

    def __neg__(self) -> "AlgebraElement":
        return self.scale(-1.0)

    def __mul__(self, other: Union["AlgebraElement", complex]) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            from .torus_algebra import normal_order_product

            return normal_order_product(self, other)
        return self.scale(complex(other))

    def __rmul__(self, other: complex) -> "AlgebraElement":
        return self.scale(complex(other))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (
            self.angle == other.angle
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.amplitudes, other.amplitudes)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"AlgebraElement(theta={self.theta!r}, terms={self.terms!r})"

    def distance(self, other: "AlgebraElement") -> float:
        """Coefficient sup-norm of the difference."""
        return (self - other).sup_norm()
