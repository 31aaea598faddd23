"""Commutative (theta = 0) grid picture and the local covering projection check.

At theta = 0 the GNS space is L^2 of the flat torus; coefficients c_rs of w(r, s) are
Fourier coefficients of f(x, y) = sum c_rs e^{2 pi i (r x + s y)} on [0, 1)^2.
The m x n-fold cover is sampled on [0, m) x [0, n) with the same grid spacing.
"""

import logging
from typing import Union

import numpy as np

from nctorus.errors import ErrorCode, NcgError, NcgException
from nctorus.reports import AxiomReport
from nctorus.torus_algebra import DeformationAngle

from .schemas import GnsVector, GnsWindow

logger = logging.getLogger(__name__)

DEFAULT_LOCAL_TOLERANCE = 1e-6


def _require_commutative(angle: DeformationAngle, operation: str) -> None:
    if not angle.is_commutative():
        raise NcgException(
            NcgError(
                error_code=ErrorCode.NONZERO_THETA,
                error_message=f"{operation} is only defined for theta = 0.",
                context={"theta": angle.theta},
            )
        )


def commutative_grid_transform(x: GnsVector, grid: int) -> np.ndarray:
    """Sample the function with Fourier coefficients x on a grid x grid lattice.

    Args:
        x: GNS vector of the commutative torus.
        grid: Samples per axis, at least 2N + 1.

    Returns:
        np.ndarray: Samples f(j / grid, l / grid) indexed [j, l].

    Raises:
        NcgException: NONZERO_THETA for a deformed torus, RESOLUTION for a coarse grid.
    """
    _require_commutative(x.angle, "commutative_grid_transform")
    if grid < x.window.side:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.RESOLUTION,
                error_message="Grid cannot resolve the window.",
                context={"grid": grid, "side": x.window.side},
            )
        )
    r, s = x.window.basis()
    spectrum = np.zeros((grid, grid), dtype=np.complex128)
    np.add.at(spectrum, (r % grid, s % grid), x.coefficients)
    return np.fft.ifft2(spectrum) * grid * grid


def inverse_grid_transform(
    samples: np.ndarray, window: GnsWindow, angle: Union[float, DeformationAngle] = 0.0
) -> GnsVector:
    """Fourier coefficients of grid samples, restricted to the window."""
    angle = DeformationAngle.of(angle)
    _require_commutative(angle, "inverse_grid_transform")
    grid = samples.shape[0]
    if samples.shape != (grid, grid) or grid < window.side:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.RESOLUTION,
                error_message="Samples must form a square grid resolving the window.",
                context={"shape": samples.shape, "side": window.side},
            )
        )
    spectrum = np.fft.fft2(samples) / (grid * grid)
    r, s = window.basis()
    return GnsVector(window=window, angle=angle, coefficients=spectrum[r % grid, s % grid])


def _spectral_dirac(spinor: np.ndarray, tau: complex, grid: int) -> np.ndarray:
    """D (psi1, psi2) = (partial^dagger psi2, partial psi1) by FFT differentiation.

    Frequencies are physical (cycles per unit length), so the same routine serves
    the base torus and any rectangular cover sampled at the same spacing.
    """
    rows, cols = spinor.shape[1:]
    kx = np.fft.fftfreq(rows, d=1.0 / grid)[:, None]
    ky = np.fft.fftfreq(cols, d=1.0 / grid)[None, :]
    d = 2j * np.pi * (kx + tau * ky)
    psi1 = np.fft.fft2(spinor[0])
    psi2 = np.fft.fft2(spinor[1])
    return np.stack([np.fft.ifft2(np.conj(d) * psi2), np.fft.ifft2(d * psi1)])


def _bump_spinor(m: int, n: int, grid: int) -> np.ndarray:
    """Smooth spinor compactly supported inside the fundamental domain of the cover."""
    x = (np.arange(m * grid) / grid)[:, None]
    y = (np.arange(n * grid) / grid)[None, :]

    def component(cx: float, cy: float) -> np.ndarray:
        rho = np.hypot(x - cx, y - cy)
        t = np.minimum(rho / 0.45, 1.0)
        with np.errstate(divide="ignore", over="ignore"):
            bump = np.where(t < 1.0, np.exp(-1.0 / (1.0 - t * t)), 0.0)
        return bump * np.exp(-(rho**2) / (2 * 0.08**2))

    return np.stack([component(0.5, 0.5), (1 + 1j) * component(0.45, 0.55)])


def _periodize(samples: np.ndarray, m: int, n: int, grid: int) -> np.ndarray:
    """phi: sum over the deck translates, landing on the base grid."""
    lead = samples.shape[:-2]
    return samples.reshape(*lead, m, grid, n, grid).sum(axis=(-4, -2))


def local_covering_check_theta0(
    m: int,
    n: int,
    grid: int = 256,
    tau: complex = 1j,
    theta: Union[float, DeformationAngle] = 0.0,
    tolerance: float = DEFAULT_LOCAL_TOLERANCE,
    seed: int = 0,
) -> AxiomReport:
    """Check the local covering projection of the m x n-fold cover at theta = 0.

    H-hat is the subspace of cover functions supported in the fundamental domain
    [0, 1)^2. The check verifies that the deck translates of H-hat are mutually
    orthogonal and tile the cover, that phi(xi) = sum_g g xi is unitary from H-hat
    onto the base space, and that phi intertwines the cover and base Dirac operators
    on a smooth spinor supported in the fundamental domain.

    Returns:
        AxiomReport: Overall residual with the four named components.

    Raises:
        NcgException: NONZERO_THETA for theta != 0, CONFIG_INVALID for bad m, n, grid.
    """
    _require_commutative(DeformationAngle.of(theta), "local_covering_check_theta0")
    if m < 1 or n < 1 or grid < 8:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CONFIG_INVALID,
                error_message="m, n must be positive and grid at least 8.",
                context={"m": m, "n": n, "grid": grid},
            )
        )
    x = (np.arange(m * grid) / grid)[:, None]
    y = (np.arange(n * grid) / grid)[None, :]
    indicator = ((x < 1.0) & (y < 1.0)).astype(np.float64)
    translates = [
        np.roll(indicator, (p * grid, q * grid), axis=(0, 1))
        for p in range(m)
        for q in range(n)
    ]
    cell = float(grid * grid)

    orthogonality = 0.0
    for i, first in enumerate(translates):
        for second in translates[i + 1 :]:
            orthogonality = max(orthogonality, float(np.sum(first * second)) / cell)
    tiling = float(np.max(np.abs(np.sum(translates, axis=0) - 1.0)))

    gen = np.random.default_rng(seed)
    base = gen.normal(size=(grid, grid)) + 1j * gen.normal(size=(grid, grid))
    lifted = np.tile(base, (m, n)) * indicator
    image = _periodize(lifted, m, n, grid)
    isometry = abs(np.linalg.norm(image) - np.linalg.norm(lifted)) / np.linalg.norm(lifted)
    surjectivity = float(np.max(np.abs(image - base)))
    unitarity = max(float(isometry), surjectivity)

    spinor = _bump_spinor(m, n, grid)
    cover_side = _periodize(_spectral_dirac(spinor, tau, grid), m, n, grid)
    base_side = _spectral_dirac(_periodize(spinor, m, n, grid), tau, grid)
    scale = float(np.linalg.norm(base_side))
    intertwining = float(np.linalg.norm(cover_side - base_side)) / max(scale, 1e-300)

    components = {
        "orthogonality": orthogonality,
        "tiling": tiling,
        "unitarity": unitarity,
        "intertwining": intertwining,
    }
    residual = max(components.values())
    logger.debug("Local covering m=%d n=%d grid=%d components %s", m, n, grid, components)
    return AxiomReport(
        axiom="local-covering",
        residual=residual,
        tolerance=tolerance,
        window=grid,
        guard=0,
        components=components,
        notes=[f"cover {m}x{n}, grid {grid} per unit cell"],
    )
