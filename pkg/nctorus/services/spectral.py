"""Facade for the Dirac operator, the spectral triple axioms and the local covering check."""

from concurrent.futures import ThreadPoolExecutor
from typing import Union

import numpy as np

from nctorus.config import RuntimeSettings
from nctorus.reports import AxiomReport, merge_reports
from nctorus.spectral_triple import (
    DiracParams,
    GnsWindow,
    SeminormEstimate,
    analytic_dirac_spectrum,
    check_first_order,
    check_real_structure,
    check_self_adjointness,
    check_sign_table,
    dirac_spectrum,
    local_covering_check_theta0,
    seminorm,
)
from nctorus.spectral_triple.local_covering import DEFAULT_LOCAL_TOLERANCE
from nctorus.spectral_triple.spectral_triple import DEFAULT_AXIOM_TOLERANCE
from nctorus.torus_algebra import DeformationAngle, generators
from nctorus.utils import ElementGenerator

KERNEL_DIMENSION = 2
DEFAULT_SPECTRUM_TOLERANCE = 1e-10
DEFAULT_SEMINORM_TOLERANCE = 1e-6

AngleLike = Union[float, DeformationAngle]


def _expand(spectrum: list[tuple[float, int]]) -> np.ndarray:
    values = [value for value, multiplicity in spectrum for _ in range(multiplicity)]
    return np.sort(np.asarray(values, dtype=np.float64))


class SpectralService:
    """Facade for the spectral triple of the (covering) noncommutative torus."""

    def __init__(self, settings: RuntimeSettings) -> None:
        """Initialize the spectral service facade."""
        self.settings = settings

    def spectrum(
        self,
        tau: complex = 1j,
        theta: AngleLike = 0.0,
        m: int = 1,
        n: int = 1,
        window: int = 16,
    ) -> list[tuple[float, int]]:
        """Eigenvalues of the truncated Dirac operator with multiplicities.

        Args:
            tau: Complex structure, Im(tau) != 0.
            theta: Deformation angle.
            m: First derivation scaling.
            n: Second derivation scaling.
            window: Truncation radius.

        Returns:
            list: (eigenvalue, multiplicity) sorted by absolute value.
        """
        return dirac_spectrum(DiracParams.of(tau, theta, m, n), window)

    def verify_spectrum(
        self,
        tau: complex = 1j,
        theta: AngleLike = 0.0,
        m: int = 1,
        n: int = 1,
        window: int = 16,
        tolerance: float = DEFAULT_SPECTRUM_TOLERANCE,
    ) -> AxiomReport:
        """Compare the numerical spectrum with +-2 pi |r/m + tau s/n| and the kernel dimension."""
        p = DiracParams.of(tau, theta, m, n)
        numeric = _expand(dirac_spectrum(p, window))
        analytic = _expand(analytic_dirac_spectrum(p, window))
        kernel = int(np.count_nonzero(np.abs(numeric) <= tolerance))
        components = {
            "eigenvalues": float(np.max(np.abs(numeric - analytic), initial=0.0)),
            "kernel": float(abs(kernel - KERNEL_DIMENSION)),
        }
        return AxiomReport(
            axiom="dirac-spectrum",
            residual=max(components.values()),
            tolerance=tolerance,
            window=window,
            components=components,
            notes=[f"kernel dimension {kernel}", f"{numeric.size} eigenvalues"],
        )

    def verify_triple_axioms(
        self,
        theta: AngleLike = 0.0,
        tau: complex = 1j,
        window: int = 32,
        guard: int = 8,
        pairs: int = 100,
        support: int = 4,
        seed: int = 0,
        tolerance: float = DEFAULT_AXIOM_TOLERANCE,
    ) -> list[AxiomReport]:
        """First-order and commutant conditions on seeded random pairs, then the sign table.

        Args:
            theta: Deformation angle.
            tau: Complex structure.
            window: Truncation radius.
            guard: Guard width; must cover twice the support.
            pairs: Number of seeded random pairs.
            support: Support radius of the random elements.
            seed: Seed of the element generator.
            tolerance: Pass threshold of every residual.

        Returns:
            list[AxiomReport]: first-order, real-structure, the three signs and
            the self-adjointness reports, in that order.
        """
        p = DiracParams.of(tau, theta)
        gns = GnsWindow(radius=window, guard=guard)
        gen = ElementGenerator(seed, self.settings.rng_version)
        batch = [(gen.element(theta, support), gen.element(theta, support)) for _ in range(pairs)]

        def run(index: int) -> tuple[AxiomReport, AxiomReport]:
            a, b = batch[index]
            return (
                check_first_order(a, b, gns, p, tolerance, seed + index),
                check_real_structure(a, b, gns, tolerance, seed + index),
            )

        with ThreadPoolExecutor(max_workers=self.settings.workers) as pool:
            results = list(pool.map(run, range(pairs)))
        note = f"{pairs} seeded pairs of support {support}, seed {seed}"
        first = merge_reports(
            "first-order", {f"pair {i}": r[0] for i, r in enumerate(results)}, tolerance, [note]
        )
        commutant = merge_reports(
            "real-structure", {f"pair {i}": r[1] for i, r in enumerate(results)}, tolerance, [note]
        )
        return [
            first,
            commutant,
            *check_sign_table(p, gns, tolerance, seed),
            *check_self_adjointness(p, gns, tolerance, seed),
        ]

    def verify_local_covering(
        self,
        m: int,
        n: int,
        grid: int = 256,
        tau: complex = 1j,
        tolerance: float = DEFAULT_LOCAL_TOLERANCE,
        seed: int = 0,
    ) -> AxiomReport:
        """Local covering projection of the m x n-fold cover of the commutative torus."""
        return local_covering_check_theta0(m, n, grid, tau, 0.0, tolerance, seed)

    def seminorms(
        self,
        theta: AngleLike = 0.0,
        tau: complex = 1j,
        max_order: int = 3,
        window: int = 6,
        seed: int = 0,
    ) -> list[SeminormEstimate]:
        """Seminorms ||u + v||_s for s = 1..max_order."""
        u, v = generators(theta)
        gns = GnsWindow(radius=window, guard=max_order)
        p = DiracParams.of(tau, theta)
        return [seminorm(u + v, s, gns, p, seed=seed) for s in range(1, max_order + 1)]

    def verify_seminorms(
        self,
        theta: AngleLike = 0.0,
        tau: complex = 1j,
        max_order: int = 3,
        window: int = 6,
        tolerance: float = DEFAULT_SEMINORM_TOLERANCE,
        seed: int = 0,
    ) -> AxiomReport:
        """||u + v||_s finite and nondecreasing in s; ||u||_1 window-stable.

        [D, u] is a constant multiple of u, so its norm is reached on every window;
        the orders s >= 2 grow with the window and are only reported.
        """
        u, _ = generators(theta)
        stability = seminorm(
            u, 1, GnsWindow(radius=window, guard=1), DiracParams.of(tau, theta), seed=seed
        )
        estimates = self.seminorms(theta, tau, max_order, window, seed)
        values = [e.value for e in estimates]
        decrease = max((a - b for a, b in zip(values, values[1:])), default=0.0)
        components = {
            "order 1 window growth": stability.growth,
            "monotonicity": max(0.0, decrease),
        }
        if not all(np.isfinite(values)):
            components["finiteness"] = float("inf")
        notes = [f"||u + v||_{e.order} = {e.value:.6f} (growth {e.growth:.2e})" for e in estimates]
        return AxiomReport(
            axiom="seminorms",
            residual=max(components.values()),
            tolerance=tolerance,
            window=window,
            guard=max_order,
            components=components,
            notes=notes,
        )
