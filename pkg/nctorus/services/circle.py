"""Facade for the commutative circle: smooth partitions and their covering sums."""

from nctorus.circle_commutative import (
    PartitionPair,
    build_partition,
    lift_to_cover,
    lift_to_line,
    verify_circ_sum,
)
from nctorus.circle_commutative.circle import DEFAULT_CIRC_TOLERANCE
from nctorus.config import RuntimeSettings
from nctorus.reports import AxiomReport

DETECTION_THRESHOLD = 0.1


class CircleService:
    """Facade for the covering identity of the circle and its negative control."""

    def __init__(self, settings: RuntimeSettings) -> None:
        """Initialize the circle service facade."""
        self.settings = settings

    def partition(self, grid: int = 4096, cutoff: int = 256) -> PartitionPair:
        """Sampled smooth partition pair."""
        return build_partition(grid=grid, cutoff=cutoff)

    def verify_fold(
        self,
        fold: int,
        grid: int = 4096,
        cutoff: int = 256,
        tolerance: float = DEFAULT_CIRC_TOLERANCE,
    ) -> AxiomReport:
        """Covering sum on the fold-sheeted cover of the circle."""
        return verify_circ_sum(lift_to_cover(self.partition(grid, cutoff), fold), tolerance)

    def verify_line(
        self,
        window: int,
        grid: int = 4096,
        cutoff: int = 256,
        tolerance: float = DEFAULT_CIRC_TOLERANCE,
    ) -> AxiomReport:
        """Covering sum on the interior of a window of the universal cover."""
        return verify_circ_sum(lift_to_line(self.partition(grid, cutoff), window), tolerance)

    def negative_control(
        self,
        fold: int,
        grid: int = 4096,
        cutoff: int = 256,
        factor: float = 0.5,
        threshold: float = DETECTION_THRESHOLD,
        tolerance: float = DEFAULT_CIRC_TOLERANCE,
    ) -> AxiomReport:
        """Scale e2 by ``factor`` and require the covering sum to break by more than ``threshold``.

        Returns:
            AxiomReport: Passing when the broken identity is detected; the residual
            is the shortfall of the observed deviation below the threshold.
        """
        pair = self.partition(grid, cutoff)
        broken = pair.model_copy(update={"e2": pair.e2.scaled(factor)})
        observed = verify_circ_sum(lift_to_cover(broken, fold), tolerance)
        return AxiomReport(
            axiom="circ-sum-negative-control",
            residual=max(0.0, threshold - observed.residual),
            tolerance=tolerance,
            components={"broken residual": observed.residual},
            notes=[f"e2 scaled by {factor:g}", *observed.notes],
        )
