"""Matrix-free operator handles and power-iteration norm estimates.

A handle acts on stacked coefficient arrays of shape (blocks, window dimension).
Handles know their adjoint, so sums, scalings and compositions of (anti)linear
maps can be estimated in norm without forming matrices.
"""

import logging
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.sparse.linalg import LinearOperator
from tenacity import (
    RetryCallState,
    before_sleep_log,
    retry,
    retry_if_exception_type,
    stop_after_attempt,
    wait_none,
)

from nctorus.errors import ErrorCode, NcgError, NcgException
from nctorus.utils import ElementGenerator

from .schemas import GnsWindow, NormEstimate, SpinorVector

logger = logging.getLogger(__name__)

ArrayMap = Callable[[np.ndarray], np.ndarray]


class Linearity(str, Enum):
    """Behaviour of a map under complex scalars."""

    LINEAR = "linear"
    ANTILINEAR = "antilinear"


def _flip(linearity: Linearity, other: Linearity) -> Linearity:
    return Linearity.LINEAR if linearity == other else Linearity.ANTILINEAR


class LinearMapHandle(BaseModel):
    """Matrix-free (anti)linear operator on a stack of GNS copies.

    For an antilinear map A the stored adjoint A^dagger satisfies
    <Ax, y> = conj(<x, A^dagger y>).

    Attributes:
        label: Human readable description.
        window: GNS window the operator acts on.
        blocks: Number of GNS copies in the domain.
        linearity: Linear or antilinear.
        forward: Action on arrays of shape (blocks, dimension).
        backward: Action of the adjoint.
    """

    label: str
    window: GnsWindow
    blocks: int
    linearity: Linearity = Linearity.LINEAR
    forward: ArrayMap
    backward: ArrayMap

    model_config = ConfigDict(arbitrary_types_allowed=True)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Apply to a stacked coefficient array."""
        return self.forward(x)

    def __call__(self, x: Union[SpinorVector, np.ndarray]):
        if isinstance(x, SpinorVector):
            return x.with_components(self.forward(x.components))
        return self.forward(x)

    def adjoint(self) -> "LinearMapHandle":
        """Adjoint handle (antiunitary convention for antilinear maps)."""
        return LinearMapHandle(
            label=f"({self.label})^*",
            window=self.window,
            blocks=self.blocks,
            linearity=self.linearity,
            forward=self.backward,
            backward=self.forward,
        )

    def _check_compatible(self, other: "LinearMapHandle") -> None:
        if other.window != self.window or other.blocks != self.blocks:
            raise NcgException(
                NcgError(
                    error_code=ErrorCode.WINDOW_MISMATCH,
                    error_message="Operators act on different spaces.",
                    context={"left": self.label, "right": other.label},
                )
            )

    def compose(self, other: "LinearMapHandle") -> "LinearMapHandle":
        """self after other."""
        self._check_compatible(other)
        first, second = other, self
        return LinearMapHandle(
            label=f"{self.label} . {other.label}",
            window=self.window,
            blocks=self.blocks,
            linearity=_flip(self.linearity, other.linearity),
            forward=lambda x: second.forward(first.forward(x)),
            backward=lambda y: first.backward(second.backward(y)),
        )

    def __matmul__(self, other: "LinearMapHandle") -> "LinearMapHandle":
        return self.compose(other)

    def _combine(self, other: "LinearMapHandle", sign: float) -> "LinearMapHandle":
        self._check_compatible(other)
        if self.linearity != other.linearity:
            raise NcgException(
                NcgError(
                    error_code=ErrorCode.NOT_LINEAR,
                    error_message="Cannot add a linear and an antilinear map.",
                )
            )
        op = "+" if sign > 0 else "-"
        return LinearMapHandle(
            label=f"({self.label} {op} {other.label})",
            window=self.window,
            blocks=self.blocks,
            linearity=self.linearity,
            forward=lambda x: self.forward(x) + sign * other.forward(x),
            backward=lambda y: self.backward(y) + sign * other.backward(y),
        )

    def __add__(self, other: "LinearMapHandle") -> "LinearMapHandle":
        return self._combine(other, 1.0)

    def __sub__(self, other: "LinearMapHandle") -> "LinearMapHandle":
        return self._combine(other, -1.0)

    def scale(self, c: complex) -> "LinearMapHandle":
        """The map x -> c A(x)."""
        c = complex(c)
        back = np.conj(c) if self.linearity == Linearity.LINEAR else c
        return LinearMapHandle(
            label=f"{c}*{self.label}",
            window=self.window,
            blocks=self.blocks,
            linearity=self.linearity,
            forward=lambda x: c * self.forward(x),
            backward=lambda y: back * self.backward(y),
        )

    def __rmul__(self, c: complex) -> "LinearMapHandle":
        return self.scale(c)

    def linearity_residual(self, seed: int = 0) -> float:
        """Deviation from the declared (anti)linearity under probe scalars."""
        gen = ElementGenerator(seed)
        x = gen.coefficients((self.blocks, self.window.dimension))
        y = gen.coefficients((self.blocks, self.window.dimension))
        alpha, beta = gen.coefficients((2,))
        if self.linearity == Linearity.ANTILINEAR:
            alpha_out, beta_out = np.conj(alpha), np.conj(beta)
        else:
            alpha_out, beta_out = alpha, beta
        lhs = self.forward(alpha * x + beta * y)
        rhs = alpha_out * self.forward(x) + beta_out * self.forward(y)
        return float(np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(lhs)), 1.0))

    def as_linear_operator(self, mask: Optional[np.ndarray] = None) -> LinearOperator:
        """Flattened scipy LinearOperator of the (optionally compressed) map."""
        if self.linearity != Linearity.LINEAR:
            raise NcgException(
                NcgError(
                    error_code=ErrorCode.NOT_LINEAR,
                    error_message="Only linear handles convert to LinearOperator.",
                    context={"label": self.label},
                )
            )
        shape = (self.blocks, self.window.dimension)
        size = self.blocks * self.window.dimension
        keep = np.ones(shape, dtype=bool) if mask is None else np.broadcast_to(mask, shape)

        def matvec(v: np.ndarray) -> np.ndarray:
            x = np.where(keep, np.asarray(v).reshape(shape), 0)
            return self.forward(x).reshape(-1)

        def rmatvec(v: np.ndarray) -> np.ndarray:
            y = self.backward(np.asarray(v).reshape(shape))
            return np.where(keep, y, 0).reshape(-1)

        return LinearOperator(
            (size, size), matvec=matvec, rmatvec=rmatvec, dtype=np.complex128
        )


def identity_handle(window: GnsWindow, blocks: int = 2) -> LinearMapHandle:
    """The identity on a stack of GNS copies."""
    return LinearMapHandle(
        label="1",
        window=window,
        blocks=blocks,
        forward=lambda x: x.copy(),
        backward=lambda y: y.copy(),
    )


class _PowerState:
    """Mutable state carried across retry attempts of the power iteration."""

    def __init__(self, operator: LinearOperator, start: np.ndarray, budget: int) -> None:
        self.operator = operator
        self.vector = start
        self.budget = budget
        self.estimate = 0.0
        self.iterations = 0


class _NotConvergedError(Exception):
    """Raised when a power-iteration budget runs out."""


def _keep_last_iterate(retry_state: RetryCallState) -> tuple[float, bool, int]:
    """After all attempts fail, return the last iterate with a warning flag."""
    state: _PowerState = retry_state.args[0]
    logger.warning(
        "Power iteration did not converge after %d iterations; last estimate %.6e",
        state.iterations,
        state.estimate,
    )
    return state.estimate, False, state.iterations


@retry(
    retry=retry_if_exception_type(_NotConvergedError),
    wait=wait_none(),
    stop=stop_after_attempt(3),
    retry_error_callback=_keep_last_iterate,
    before_sleep=before_sleep_log(logger, logging.WARNING),
)
def _power_iterate(
    state: _PowerState, rtol: float, atol: float
) -> tuple[float, bool, int]:
    previous = state.estimate
    for _ in range(state.budget):
        image = state.operator.matvec(state.vector)
        estimate = float(np.linalg.norm(image))
        state.iterations += 1
        if estimate == 0.0:
            state.estimate = 0.0
            return 0.0, True, state.iterations
        back = state.operator.rmatvec(image)
        norm_back = float(np.linalg.norm(back))
        state.estimate = max(estimate, state.estimate)
        if norm_back == 0.0:
            return state.estimate, True, state.iterations
        state.vector = back / norm_back
        if abs(estimate - previous) <= max(rtol * estimate, atol):
            return state.estimate, True, state.iterations
        previous = estimate
    state.budget *= 2
    raise _NotConvergedError(state.estimate)


def op_norm_estimate(
    h: LinearMapHandle,
    iterations: int = 200,
    seed: int = 0,
    interior_radius: Optional[int] = None,
    rtol: float = 1e-12,
    atol: float = 0.0,
) -> NormEstimate:
    """Estimate the norm of h restricted to the interior subspace.

    Power iteration on P h* h P started from a seeded random interior vector.
    The returned value is the largest ||h x|| seen over unit interior x, hence a
    lower bound. When the budget runs out the iteration is resumed with a
    doubled budget; after the last attempt the final iterate is returned with
    ``converged=False``.

    Args:
        h: Linear handle.
        iterations: Initial iteration budget.
        seed: Seed of the starting vector.
        interior_radius: Radius of the compression subspace (window radius minus guard by default).
        rtol: Relative convergence tolerance between successive estimates.
        atol: Absolute convergence tolerance.

    Returns:
        NormEstimate: The estimate and convergence diagnostics.

    Raises:
        NcgException: NOT_LINEAR for antilinear handles.
    """
    radius = h.window.interior_radius if interior_radius is None else interior_radius
    mask = h.window.mask(radius)
    operator = h.as_linear_operator(mask)
    gen = ElementGenerator(seed)
    start = gen.coefficients((h.blocks, h.window.dimension)) * mask
    start = start.reshape(-1)
    start /= np.linalg.norm(start)
    state = _PowerState(operator, start, int(iterations))
    value, converged, used = _power_iterate(state, rtol, atol)
    return NormEstimate(
        value=value,
        converged=converged,
        iterations=used,
        window=h.window.radius,
        interior_radius=radius,
        label=h.label,
    )
