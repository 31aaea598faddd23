"""Covering completeness: the partition identity sum_iota e'_iota (g e_iota) = delta_{g,e}.

The elements are e_iota = e^m_{iota_1}(u') e^n_{iota_2}(v') built by functional calculus
from the lifted circle partitions, with e'_iota = e_iota*. Because every factor is a
function of a single generator, the sum factorizes as

    sum_iota e_iota* g(e_iota) = sum_{r, s} A_p[r] B_{q, r}[s] w(r, s)

with A_p the u'-convolution of the partition lifts and B_{q, r} the v'-convolution
twisted by e^{-i theta' a r}. Only rows r with a non-negligible A_p[r] are expanded.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from nctorus.circle_commutative import CircleFunction, build_partition, lift_to_cover
from nctorus.circle_commutative.circle import MIN_GRID
from nctorus.errors import ErrorCode, NcgError, NcgException
from nctorus.reports import AxiomReport
from nctorus.torus_algebra import AlgebraElement, DeformationAngle, adjoint

from .coverings import AngleLike, _roots_of_unity, group_elements, theta_prime
from .schemas import CoveringParams, GroupElement

logger = logging.getLogger(__name__)

MIN_CUTOFF = 8
ACCEPTANCE_TOLERANCE = 1e-8
ROUNDING_FLOOR = 1e-12


class _SideData:
    """Truncated cover coefficients of one generator's partition lifts."""

    def __init__(self, fold: int, cutoff: int, grid: int) -> None:
        pair = build_partition(grid=grid, cutoff=cutoff)
        family = lift_to_cover(pair, fold)
        self.fold = fold
        self.reach = fold * cutoff
        self.coefficients: list[np.ndarray] = []
        self.norms: list[float] = []
        self.tails: list[float] = []
        j = np.fft.fftfreq(fold * grid, d=1.0 / (fold * grid))
        beyond = np.abs(j) > self.reach
        for index in family.indices():
            f = CircleFunction(samples=family.functions[index], fold=fold)
            spectrum = f.spectrum()
            self.coefficients.append(f.coefficients(self.reach))
            self.norms.append(float(np.linalg.norm(spectrum)))
            self.tails.append(float(np.linalg.norm(spectrum[beyond])))

    @property
    def exponents(self) -> np.ndarray:
        return np.arange(-self.reach, self.reach + 1)

    def phases(self, residue: int) -> np.ndarray:
        """Characters of the deck residue on the truncated exponents."""
        return _roots_of_unity(self.fold)[(residue * self.exponents) % self.fold]


def _default_grid(cutoff: int) -> int:
    return max(MIN_GRID, 4 * cutoff)


def _require_cutoff(cutoff: int) -> None:
    if cutoff < MIN_CUTOFF:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.RESOLUTION,
                error_message=f"Fourier cutoff must be at least {MIN_CUTOFF}.",
                context={"cutoff": cutoff},
            )
        )


def covering_partition_elements(
    c: CoveringParams,
    cutoff: int,
    theta: AngleLike = 0.0,
    grid: Optional[int] = None,
) -> list[tuple[AlgebraElement, AlgebraElement]]:
    """Pairs (e_iota, e'_iota) at theta' for iota in I_m x I_n.

    Intended for small cutoffs; the coefficient arrays are dense.
    """
    _require_cutoff(cutoff)
    grid = grid or _default_grid(cutoff)
    angle = theta_prime(DeformationAngle.of(theta), c)
    u_side = _SideData(c.m, cutoff, grid)
    v_side = _SideData(c.n, cutoff, grid)
    r, s = np.meshgrid(u_side.exponents, v_side.exponents, indexing="ij")
    pairs = []
    for c1 in u_side.coefficients:
        for c2 in v_side.coefficients:
            e = AlgebraElement.build(angle, r, s, np.outer(c1, c2))
            pairs.append((e, adjoint(e)))
    return pairs


def _u_convolution(side: _SideData, p: int) -> np.ndarray:
    """A_p = sum_iota1 conj(f1) (p f1), coefficients r = -2mK..2mK."""
    phase = side.phases(p)
    total = np.zeros(4 * side.reach + 1, dtype=np.complex128)
    for c1 in side.coefficients:
        total += np.convolve(np.conj(c1[::-1]), c1 * phase)
    return total


def _v_row(side: _SideData, q: int, r: int, angle: DeformationAngle) -> np.ndarray:
    """B_{q, r}: v'-convolution with the commutation twist of u'^r past v'^a."""
    phase = side.phases(q)
    twist = angle.twist(side.exponents * r)
    total = np.zeros(4 * side.reach + 1, dtype=np.complex128)
    for c2 in side.coefficients:
        total += np.convolve(np.conj(c2[::-1]) * twist, c2 * phase)
    return total


def _group_residual(
    g: GroupElement,
    u_side: _SideData,
    v_side: _SideData,
    angle: DeformationAngle,
    row_budget: float,
    exhaustive: bool,
) -> tuple[float, int]:
    a = _u_convolution(u_side, g.p)
    v_mass = float(sum(n * n for n in v_side.norms))
    center = 2 * u_side.reach
    rows = np.arange(a.size)
    if not exhaustive:
        rows = np.nonzero((np.abs(a) * v_mass > row_budget) | (rows == center))[0]
    residual = 0.0
    skipped = np.ones(a.size, dtype=bool)
    skipped[rows] = False
    if np.any(skipped):
        residual = float(np.max(np.abs(a[skipped])) * v_mass)
    for index in rows:
        r = int(index) - center
        values = a[index] * _v_row(v_side, g.q, r, angle)
        if g.is_identity() and r == 0:
            values[2 * v_side.reach] -= 1.0
        residual = max(residual, float(np.max(np.abs(values))))
    return residual, len(rows)


def _truncation_tolerance(u_side: _SideData, v_side: _SideData) -> float:
    """Coefficient sup-norm bound for the error made by truncating every e_iota.

    With Delta = e - e_K, |(e* g e - e_K* g e_K)_rs| <= ||Delta||_2 (||e||_2 + ||e_K||_2).
    """
    bound = 0.0
    for n1, t1 in zip(u_side.norms, u_side.tails):
        for n2, t2 in zip(v_side.norms, v_side.tails):
            bound += 2.0 * (t1 * n2 + n1 * t2) * n1 * n2
    return bound + ROUNDING_FLOOR


def verify_covering_completeness(
    c: CoveringParams,
    fourier_cutoff: int,
    theta: AngleLike = 0.0,
    grid: Optional[int] = None,
    exhaustive: bool = False,
    workers: int = 1,
) -> AxiomReport:
    """Check sum_iota e'_iota (g e_iota) = delta_{g,e} 1 for every deck transformation.

    Args:
        c: Covering parameters.
        fourier_cutoff: Base-circle frequency K; series on an m-fold cover keep |j| <= m K.
        theta: Base angle; the identity is evaluated at theta'.
        grid: Samples per base circle, default max(64, 4 K).
        exhaustive: Expand every coefficient row instead of bounding negligible ones.
        workers: Threads used across group elements.

    Returns:
        AxiomReport: Residual in the coefficient sup-norm, maximized over g, against a
        tolerance derived from the measured Fourier tails.

    Raises:
        NcgException: RESOLUTION when the cutoff is below 8 or the grid too coarse.
    """
    _require_cutoff(fourier_cutoff)
    grid = grid or _default_grid(fourier_cutoff)
    angle = theta_prime(DeformationAngle.of(theta), c)
    u_side = _SideData(c.m, fourier_cutoff, grid)
    v_side = _SideData(c.n, fourier_cutoff, grid)
    tolerance = _truncation_tolerance(u_side, v_side)
    notes = [
        "index set I_m x I_n",
        f"fourier cutoff {fourier_cutoff} (base frequency)",
        f"grid {grid}",
    ]
    if tolerance > ACCEPTANCE_TOLERANCE:
        logger.warning(
            "Fourier cutoff %d too small: tail bound %.3e exceeds %.1e",
            fourier_cutoff,
            tolerance,
            ACCEPTANCE_TOLERANCE,
        )
        notes.append("cutoff-too-small")

    elements = list(group_elements(c))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        outcomes = list(
            pool.map(
                lambda g: _group_residual(
                    g, u_side, v_side, angle, tolerance / 4.0, exhaustive
                ),
                elements,
            )
        )
    components = {f"g=({g.p},{g.q})": res for g, (res, _) in zip(elements, outcomes)}
    expanded = sum(rows for _, rows in outcomes)
    logger.debug("Completeness for %s expanded %d coefficient rows", c, expanded)
    return AxiomReport(
        axiom="covering-completeness",
        residual=max(components.values()),
        tolerance=tolerance,
        window=fourier_cutoff,
        components=components,
        notes=notes,
    )
