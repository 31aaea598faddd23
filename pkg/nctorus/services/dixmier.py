"""Facade for singular value streams and the noncommutative integral."""

import math

import numpy as np

from nctorus.config import RuntimeSettings
from nctorus.dixmier_trace import (
    DixmierEstimate,
    SingularValueStream,
    dirac_integral,
    dirac_inverse_power_stream,
    ncint_estimate,
    sigma_lambda,
    sigma_n,
    verify_covering_scaling,
    weyl_integral_prediction,
)
from nctorus.dixmier_trace.dirac_stream import DEFAULT_SCALING_TOLERANCE
from nctorus.reports import AxiomReport
from nctorus.utils import ElementGenerator

DEFAULT_HARMONIC_TOLERANCE = 0.02
SANDWICH_SIZE = 40


def harmonic_stream(length: int) -> SingularValueStream:
    """The truncated stream 1, 1/2, ..., 1/length."""
    return SingularValueStream(
        values=1.0 / np.arange(1, length + 1), provenance="harmonic", finite_rank=False
    )


class DixmierService:
    """Facade for the Dixmier trace of Dirac inverse powers and test streams."""

    def __init__(self, settings: RuntimeSettings) -> None:
        """Initialize the Dixmier service facade."""
        self.settings = settings

    def stream(
        self, tau: complex = 1j, m: int = 1, n: int = 1, power: float = 2.0, count: int = 1000
    ) -> SingularValueStream:
        """Largest singular values of |D|^{-power} on the m x n cover."""
        return dirac_inverse_power_stream(tau, m, n, power, count)

    def integral(
        self, tau: complex = 1j, m: int = 1, n: int = 1, lambda_max: float = 1e6
    ) -> DixmierEstimate:
        """Extrapolated noncommutative integral of |D|^{-2}."""
        return dirac_integral(tau, m, n, lambda_max)

    def verify_integral(
        self,
        tau: complex = 1j,
        m: int = 1,
        n: int = 1,
        lambda_max: float = 1e6,
        tolerance: float = DEFAULT_SCALING_TOLERANCE,
    ) -> AxiomReport:
        """Relative deviation of the integral from m n / (2 pi |Im tau|)."""
        estimate = self.integral(tau, m, n, lambda_max)
        expected = weyl_integral_prediction(tau, m, n)
        return AxiomReport(
            axiom="dirac-integral",
            residual=abs(estimate.value / expected - 1.0),
            tolerance=tolerance,
            notes=[
                f"integral {estimate.value:.6f} against {expected:.6f}",
                f"fit residual {estimate.fit_residual:.2e} at lambda_max {lambda_max:g}",
            ],
        )

    def verify_scaling(
        self,
        tau: complex,
        m: int,
        n: int,
        lambda_max: float = 1e6,
        tolerance: float = DEFAULT_SCALING_TOLERANCE,
    ) -> AxiomReport:
        """Covering scaling of the integral by the deck group order."""
        return verify_covering_scaling(
            tau, m, n, lambda_max, tolerance, workers=self.settings.workers
        )

    def verify_functionals(
        self,
        pairs: int = 1000,
        lambda_max: float = 1e5,
        seed: int = 0,
        tolerance: float = DEFAULT_HARMONIC_TOLERANCE,
    ) -> AxiomReport:
        """Interpolation, the sandwich inequality and the harmonic integral.

        Args:
            pairs: Seeded pairs of commuting positive diagonals.
            lambda_max: Upper end of the harmonic fit.
            seed: Seed of the generator.
            tolerance: Threshold of the harmonic deviation; the exact properties are
                measured against the same threshold.

        Returns:
            AxiomReport: Components per property.
        """
        harmonic = harmonic_stream(math.ceil(lambda_max))
        breakpoints = max(abs(sigma_lambda(harmonic, float(k)) - sigma_n(harmonic, k)) for k in range(1, 51))
        half = abs(sigma_lambda(harmonic, 0.5) - 0.5 * harmonic.norm)
        rng = ElementGenerator(seed, self.settings.rng_version).rng
        violation = 0.0
        for _ in range(pairs):
            x, y = rng.uniform(0.0, 10.0, size=(2, SANDWICH_SIZE))
            lam = float(rng.uniform(0.01, 50.0))
            middle = sigma_lambda(SingularValueStream.from_diagonal(x), lam) + sigma_lambda(
                SingularValueStream.from_diagonal(y), lam
            )
            total = SingularValueStream.from_diagonal(x + y)
            violation = max(
                violation,
                sigma_lambda(total, lam) - middle,
                middle - sigma_lambda(total, 2.0 * lam),
            )
        estimate = ncint_estimate(harmonic, lambda_max)
        components = {
            "breakpoints": breakpoints,
            "half-norm": half,
            "sandwich": max(0.0, violation),
            "harmonic": abs(estimate.value - 1.0),
        }
        return AxiomReport(
            axiom="dixmier-functionals",
            residual=max(components.values()),
            tolerance=tolerance,
            components=components,
            notes=[f"{pairs} seeded diagonal pairs, seed {seed}"],
        )
