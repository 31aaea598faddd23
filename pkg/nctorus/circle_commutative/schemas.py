"""This module defines schemas for grid functions on the circle and its finite covers.

It includes the sampled circle function with its discrete Fourier data, the smooth
partition pair and the family of partition lifts to an n-fold cover.
"""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from nctorus.errors import ErrorCode, NcgError, NcgException


class CircleFunction(BaseModel):
    """Uniform samples of a function on the n-fold cover [0, 2 pi n) of the circle.

    Sample j sits at x = 2 pi j / P where P = len(samples) / fold is the number of
    samples per base circle. Fourier modes are taken in the cover variable
    phi = x / fold, so a function on the n-fold cover has modes e^{i j phi}.

    Attributes:
        samples: Complex grid values.
        fold: Number of sheets n of the cover.
        smoothness: Free-form smoothness tag.
        label: Human readable name.
    """

    samples: np.ndarray
    fold: int = Field(default=1, description="Number of sheets of the cover.")
    smoothness: str = Field(default="smooth", description="Smoothness tag.")
    label: str = Field(default="", description="Name of the function.")

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate the sample layout."""
        if not isinstance(values, dict):
            return values
        values = dict(values)
        cls._validate_samples(values)
        return values

    @classmethod
    def _validate_samples(cls, values):
        samples = np.asarray(values.get("samples"), dtype=np.complex128)
        fold = int(values.get("fold", 1))
        if fold < 1:
            raise ValueError("fold must be a positive integer")
        if samples.ndim != 1 or samples.size == 0 or samples.size % fold:
            raise ValueError("samples must be a nonempty 1-D array divisible by the fold")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        values["samples"] = samples
        return values

    @property
    def grid(self) -> int:
        """Samples per base circle."""
        return self.samples.size // self.fold

    @property
    def size(self) -> int:
        """Total number of samples on the cover."""
        return int(self.samples.size)

    def spectrum(self) -> np.ndarray:
        """Full discrete Fourier coefficients, index j mod size."""
        return np.fft.fft(self.samples) / self.size

    def coefficients(self, cutoff: int) -> np.ndarray:
        """Fourier coefficients c_{-K}..c_{K} in the cover variable."""
        if 2 * cutoff + 1 > self.size:
            raise NcgException(
                NcgError(
                    error_code=ErrorCode.RESOLUTION,
                    error_message="Cutoff exceeds the grid resolution.",
                    context={"cutoff": cutoff, "size": self.size},
                )
            )
        spectrum = self.spectrum()
        return spectrum[np.arange(-cutoff, cutoff + 1) % self.size]

    def scaled(self, factor: complex) -> "CircleFunction":
        """The function multiplied by a constant."""
        return self.model_copy(update={"samples": self.samples * factor})

    def with_samples(self, samples: np.ndarray, fold: Optional[int] = None) -> "CircleFunction":
        """Same metadata with new samples."""
        return CircleFunction(
            samples=samples,
            fold=self.fold if fold is None else fold,
            smoothness=self.smoothness,
            label=self.label,
        )

    def grid_points(self) -> np.ndarray:
        """Sample positions x on [0, 2 pi n)."""
        return 2 * np.pi * np.arange(self.size) / self.grid

    def is_real(self, tolerance: float = 0.0) -> bool:
        """True when the imaginary parts vanish."""
        return bool(np.max(np.abs(self.samples.imag)) <= tolerance)


class PartitionPair(BaseModel):
    """Smooth partition of unity a_1 + a_2 = 1 on the circle with square roots e_i.

    Attributes:
        a1: e1 squared, supported in U_1.
        a2: e2 squared, supported in U_2.
        e1: First partition root.
        e2: Second partition root.
        cutoff: Fourier cutoff K the pair is meant to be truncated at.
    """

    a1: CircleFunction
    a2: CircleFunction
    e1: CircleFunction
    e2: CircleFunction
    cutoff: int = Field(default=256, description="Fourier cutoff K.")

    @property
    def grid(self) -> int:
        """Samples per circle."""
        return self.e1.grid

    def roots(self) -> tuple[CircleFunction, CircleFunction]:
        """(e1, e2)."""
        return self.e1, self.e2


class LiftedFamily(BaseModel):
    """Translates g e~_i of the partition lifts on the n-fold cover.

    A non-periodic family lives on a window of 2W + 1 sheets of the line R -> S^1,
    with sheet 0 in the middle and translates shifting in zeros at the ends.

    Attributes:
        fold: Number of sheets n, or 2W + 1 for a window of the line.
        grid: Samples per base circle P.
        functions: Cover samples keyed by iota = (g, i), i in {1, 2}.
        periodic: False for a truncated window of the line.
    """

    fold: int
    grid: int
    functions: dict[tuple[int, int], np.ndarray]
    periodic: bool = Field(default=True, description="Cyclic deck group Z_n.")

    model_config = ConfigDict(arbitrary_types_allowed=True)

    def indices(self) -> list[tuple[int, int]]:
        """All indices iota = (g, i) in storage order."""
        return sorted(self.functions)

    def function(self, g: int, i: int) -> CircleFunction:
        """The lift e^n_(g, i) as a circle function on the cover."""
        key = g % self.fold if self.periodic else g
        return CircleFunction(
            samples=self.functions[(key, i)],
            fold=self.fold,
            label=f"e^{self.fold}_({key},{i})",
        )

    @property
    def window(self) -> int:
        """Half-width W of a line window, 0 for periodic families."""
        return 0 if self.periodic else (self.fold - 1) // 2

    def deck(self) -> list[int]:
        """Deck translations checked by the covering identity."""
        if self.periodic:
            return list(range(self.fold))
        return list(range(-self.window, self.window + 1))

    def translate(self, samples: np.ndarray, g: int) -> np.ndarray:
        """Deck translation x -> x + 2 pi g acting on cover samples."""
        if self.periodic:
            return np.roll(samples, self.grid * g)
        shift = self.grid * g
        out = np.zeros_like(samples)
        if abs(shift) >= samples.size:
            return out
        if shift >= 0:
            out[shift:] = samples[: samples.size - shift]
        else:
            out[:shift] = samples[-shift:]
        return out

    def interior(self) -> np.ndarray:
        """Sample mask away from the truncated ends of a line window."""
        mask = np.ones(self.fold * self.grid, dtype=bool)
        if not self.periodic:
            mask[: self.grid] = False
            mask[-self.grid :] = False
        return mask
