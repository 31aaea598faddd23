"""Toolkit: a unified entry point for every verification in nctorus."""

from typing import Optional

from nctorus.config import RuntimeSettings
from nctorus.services import (
    CircleService,
    CoveringService,
    DixmierService,
    SpectralService,
)


class Toolkit:
    """Unified access to all service facades."""

    def __init__(self, settings: Optional[RuntimeSettings] = None) -> None:
        """Initialize the Toolkit with all service facades."""
        self.settings = settings or RuntimeSettings.from_env()

        # spectral => Dirac operator, triple axioms, local covering, seminorms
        self.spectral = SpectralService(settings=self.settings)
        self.spectrum = self.spectral.spectrum  # Alias for convenience

        # coverings => completeness, embedding, decomposition, towers
        self.coverings = CoveringService(settings=self.settings)

        # circle => commutative covering sums
        self.circle = CircleService(settings=self.settings)

        # dixmier => singular value streams and the noncommutative integral
        self.dixmier = DixmierService(settings=self.settings)
        self.integral = self.dixmier.integral  # Alias for convenience
