"""Torus Algebra: arithmetic in the truncated noncommutative torus.

Elements are finite sums a = sum a_rs u^r v^s with uv = e^{i theta} vu, so that
monomials multiply as w(r1,s1) w(r2,s2) = e^{-i theta s1 r2} w(r1+r2, s1+s2).
All operations are pure functions on immutable elements.
"""

import logging
import math
from typing import Union

import numpy as np

from nctorus.errors import ErrorCode, NcgError, NcgException

from .schemas import AlgebraElement, DeformationAngle

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * math.pi
AngleLike = Union[float, DeformationAngle]


def ensure_same_angle(a: AlgebraElement, b: AlgebraElement) -> None:
    """Raise THETA_MISMATCH unless both elements live in the same algebra."""
    if a.angle != b.angle:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.THETA_MISMATCH,
                error_message="Elements belong to algebras with different deformation angles.",
                context={"left": a.theta, "right": b.theta},
            )
        )


def ensure_complex_tau(tau: complex) -> complex:
    """Raise REAL_TAU when Im(tau) vanishes."""
    tau = complex(tau)
    if tau.imag == 0.0:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.REAL_TAU,
                error_message="The modular parameter tau must have nonzero imaginary part.",
                context={"tau": str(tau)},
            )
        )
    return tau


def _ensure_scaling(m: int, n: int) -> None:
    if int(m) < 1 or int(n) < 1:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CONFIG_INVALID,
                error_message="Covering multiplicities m, n must be positive integers.",
                context={"m": m, "n": n},
            )
        )


def unit(angle: AngleLike) -> AlgebraElement:
    """The identity element 1 = w(0, 0)."""
    return monomial(angle, 0, 0)


def zero(angle: AngleLike) -> AlgebraElement:
    """The zero element."""
    return AlgebraElement.build(
        DeformationAngle.of(angle), np.zeros(0), np.zeros(0), np.zeros(0)
    )


def monomial(angle: AngleLike, r: int, s: int, amplitude: complex = 1.0) -> AlgebraElement:
    """The single term amplitude * u^r v^s."""
    return AlgebraElement.build(
        DeformationAngle.of(angle),
        np.array([r]),
        np.array([s]),
        np.array([amplitude], dtype=np.complex128),
    )


def generators(angle: AngleLike) -> tuple[AlgebraElement, AlgebraElement]:
    """The unitary generators (u, v)."""
    return monomial(angle, 1, 0), monomial(angle, 0, 1)


def normal_order_product(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Normal-ordered product of two elements of the same algebra.

    Args:
        a: Left factor.
        b: Right factor.

    Returns:
        AlgebraElement: The product ab, with support radius at most the sum of radii.

    Raises:
        NcgException: THETA_MISMATCH when the angles differ.
    """
    ensure_same_angle(a, b)
    if a.is_zero() or b.is_zero():
        return zero(a.angle)
    r1, s1 = a.r[:, None], a.s[:, None]
    r2, s2 = b.r[None, :], b.s[None, :]
    amplitudes = (
        a.amplitudes[:, None] * b.amplitudes[None, :] * a.angle.twist(s1 * r2)
    )
    return AlgebraElement.build(a.angle, r1 + r2, s1 + s2, amplitudes)


def adjoint(a: AlgebraElement) -> AlgebraElement:
    """Involution (c w(r,s))* = conj(c) e^{-i theta r s} w(-r,-s)."""
    amplitudes = np.conj(a.amplitudes) * a.angle.twist(a.r * a.s)
    return AlgebraElement.build(a.angle, -a.r, -a.s, amplitudes)


def trace_tau0(a: AlgebraElement) -> complex:
    """The trace state tau_0(a) = a_00."""
    return a.coefficient(0, 0)


def gns_inner(a: AlgebraElement, b: AlgebraElement) -> complex:
    """GNS inner product (a, b) = tau_0(a* b), conjugate-linear in a."""
    ensure_same_angle(a, b)
    if a.is_zero() or b.is_zero():
        return 0j
    common, ia, ib = _intersect_monomials(a.indices, b.indices)
    if common == 0:
        return 0j
    return complex(np.sum(np.conj(a.amplitudes[ia]) * b.amplitudes[ib]))


def _intersect_monomials(
    left: np.ndarray, right: np.ndarray
) -> tuple[int, np.ndarray, np.ndarray]:
    width = int(max(np.abs(left).max(), np.abs(right).max())) * 2 + 1
    lk = (left[:, 0] + width) * (2 * width + 1) + left[:, 1]
    rk = (right[:, 0] + width) * (2 * width + 1) + right[:, 1]
    _, ia, ib = np.intersect1d(lk, rk, assume_unique=True, return_indices=True)
    return len(ia), ia, ib


def delta1(a: AlgebraElement) -> AlgebraElement:
    """Derivation delta_1: a_rs -> 2 pi i r a_rs."""
    return a.map_amplitudes(TWO_PI_I * a.r)


def delta2(a: AlgebraElement) -> AlgebraElement:
    """Derivation delta_2: a_rs -> 2 pi i s a_rs."""
    return a.map_amplitudes(TWO_PI_I * a.s)


def scaled_derivations(
    a: AlgebraElement, m: int, n: int
) -> tuple[AlgebraElement, AlgebraElement]:
    """Derivations of an m x n covering algebra, (2 pi i r/m, 2 pi i s/n).

    On embedded elements (coefficients at (m r, n s)) they restrict to the base
    derivations delta_1, delta_2.
    """
    _ensure_scaling(m, n)
    return (
        a.map_amplitudes(TWO_PI_I * a.r / m),
        a.map_amplitudes(TWO_PI_I * a.s / n),
    )


def dirac_multiplier(
    r: np.ndarray, s: np.ndarray, tau: complex, m: int = 1, n: int = 1
) -> np.ndarray:
    """Eigenvalue 2 pi i (r/m + tau s/n) of the derivation partial_tau on w(r, s)."""
    return TWO_PI_I * (np.asarray(r) / m + tau * np.asarray(s) / n)


def partial_tau(
    a: AlgebraElement, tau: complex, m: int = 1, n: int = 1
) -> AlgebraElement:
    """Derivation partial = delta_1 + tau delta_2 (scaled by 1/m, 1/n on covers).

    Raises:
        NcgException: REAL_TAU when Im(tau) == 0.
    """
    tau = ensure_complex_tau(tau)
    _ensure_scaling(m, n)
    return a.map_amplitudes(dirac_multiplier(a.r, a.s, tau, m, n))


def partial_tau_dagger(
    a: AlgebraElement, tau: complex, m: int = 1, n: int = 1
) -> AlgebraElement:
    """Formal adjoint partial^dagger = -delta_1 - conj(tau) delta_2.

    Raises:
        NcgException: REAL_TAU when Im(tau) == 0.
    """
    tau = ensure_complex_tau(tau)
    _ensure_scaling(m, n)
    return a.map_amplitudes(np.conj(dirac_multiplier(a.r, a.s, tau, m, n)))


def rapid_decay_seminorm(a: AlgebraElement, k: int) -> float:
    """Smoothness seminorm sup_{r,s} (1 + r^2 + s^2)^k |a_rs|."""
    if a.is_zero():
        return 0.0
    weight = (1.0 + a.r.astype(float) ** 2 + a.s.astype(float) ** 2) ** int(k)
    return float(np.max(weight * np.abs(a.amplitudes)))
