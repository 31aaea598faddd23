"""Facade for covering projections, their completeness and towers of coverings."""

from typing import Optional

from nctorus.config import RuntimeSettings
from nctorus.coverings import (
    CoherentPrefix,
    CoveringParams,
    TowerSpec,
    coherence_check,
    corrupt_prefix,
    descent_prefix,
    embed,
    limit_inner_estimate,
    module_inner,
    orthogonal_split,
    theta_prime,
    translate_orthogonal_element,
    verify_covering_completeness,
)
from nctorus.coverings.coverings import AngleLike
from nctorus.coverings.tower import DEFAULT_COHERENCE_TOLERANCE
from nctorus.errors import ErrorCode, NcgError, NcgException
from nctorus.reports import AxiomReport
from nctorus.torus_algebra import adjoint, monomial
from nctorus.utils import ElementGenerator

DEFAULT_EXACT_TOLERANCE = 1e-12
DEFAULT_TRAJECTORY_TOLERANCE = 1e-10
CORRUPTION_AMPLITUDE = 0.5
DETECTION_MARGIN = 0.1


class CoveringService:
    """Facade for finite coverings of the noncommutative torus."""

    def __init__(self, settings: RuntimeSettings) -> None:
        """Initialize the covering service facade."""
        self.settings = settings

    def _generator(self, seed: int) -> ElementGenerator:
        return ElementGenerator(seed, self.settings.rng_version)

    def verify_completeness(
        self,
        m: int,
        n: int,
        k: int = 0,
        theta: AngleLike = 0.0,
        cutoff: int = 256,
        grid: Optional[int] = None,
        exhaustive: bool = False,
    ) -> AxiomReport:
        """Check the covering partition identity on A_theta'.

        Args:
            m: Order in the u-direction.
            n: Order in the v-direction.
            k: Winding.
            theta: Base angle.
            cutoff: Base-circle Fourier cutoff.
            grid: Samples per base circle.
            exhaustive: Expand every coefficient row.

        Returns:
            AxiomReport: Worst residual over the deck group.
        """
        return verify_covering_completeness(
            CoveringParams(m=m, n=n, k=k),
            cutoff,
            theta,
            grid=grid,
            exhaustive=exhaustive,
            workers=self.settings.workers,
        )

    def verify_embedding(
        self,
        m: int,
        n: int,
        k: int = 0,
        theta: AngleLike = 0.0,
        pairs: int = 1000,
        radius: int = 40,
        seed: int = 0,
        tolerance: float = DEFAULT_EXACT_TOLERANCE,
    ) -> AxiomReport:
        """Check that the embedding is a *-homomorphism.

        Monomial pairs must satisfy the phase identity exactly; random elements are
        compared in the coefficient sup-norm.
        """
        c = CoveringParams(m=m, n=n, k=k)
        gen = self._generator(seed)
        mismatches = 0
        for _ in range(pairs):
            x, y = gen.monomial_pair(radius)
            a, b = monomial(theta, *x), monomial(theta, *y)
            mismatches += int(embed(a * b, c) != embed(a, c) * embed(b, c))
        amplitude = 0.0
        involution = 0.0
        for _ in range(max(1, pairs // 50)):
            a, b = gen.element(theta, 5, terms=8), gen.element(theta, 5, terms=8)
            amplitude = max(amplitude, embed(a * b, c).distance(embed(a, c) * embed(b, c)))
            involution = max(involution, embed(adjoint(a), c).distance(adjoint(embed(a, c))))
        components = {
            "phase mismatches": float(mismatches),
            "amplitude": amplitude,
            "adjoint": involution,
        }
        return AxiomReport(
            axiom="embedding-homomorphism",
            residual=max(components.values()),
            tolerance=tolerance,
            components=components,
            notes=[f"{pairs} monomial pairs within radius {radius}, seed {seed}"],
        )

    def verify_decomposition(
        self,
        m: int,
        n: int,
        k: int = 0,
        theta: AngleLike = 0.0,
        count: int = 500,
        radius: int = 6,
        seed: int = 0,
        tolerance: float = DEFAULT_EXACT_TOLERANCE,
    ) -> AxiomReport:
        """Check that the invariant part and its complement are module-orthogonal and sum to a."""
        c = CoveringParams(m=m, n=n, k=k)
        angle = theta_prime(theta, c)
        gen = self._generator(seed)
        orthogonality = reconstruction = 0.0
        for _ in range(count):
            top = gen.element(angle, radius, terms=12)
            invariant, complement = orthogonal_split(top, c)
            orthogonality = max(orthogonality, module_inner(invariant, complement, c).sup_norm())
            reconstruction = max(reconstruction, (invariant + complement).distance(top))
        components = {"orthogonality": orthogonality, "reconstruction": reconstruction}
        return AxiomReport(
            axiom="module-decomposition",
            residual=max(components.values()),
            tolerance=tolerance,
            components=components,
            notes=[f"{count} seeded elements, seed {seed}"],
        )

    def coherent_tower(
        self,
        tower: TowerSpec,
        seed: int = 0,
        corrupt_level: Optional[int] = None,
        tolerance: float = DEFAULT_COHERENCE_TOLERANCE,
        trajectory_tolerance: float = DEFAULT_TRAJECTORY_TOLERANCE,
    ) -> list[AxiomReport]:
        """Coherence and inner-product constancy of a descent prefix along the tower.

        With ``corrupt_level`` a third report checks that a corrupted copy of the
        prefix is flagged at that level.
        """
        prefix = descent_prefix(translate_orthogonal_element(tower, seed), tower)
        reports = [coherence_check(prefix, tower, tolerance, self.settings.workers)]
        trajectory = limit_inner_estimate(prefix, prefix)
        components = {
            f"level {level}": value.distance(trajectory.values[0])
            for level, value in enumerate(trajectory.values)
        }
        reports.append(
            AxiomReport(
                axiom="inner-trajectory",
                residual=trajectory.spread,
                tolerance=trajectory_tolerance,
                window=tower.depth,
                components=components,
                notes=[f"{trajectory.normalization} normalization"],
            )
        )
        if corrupt_level is not None:
            reports.append(self._corruption_report(prefix, corrupt_level, tolerance))
        return reports

    def _corruption_report(
        self, prefix: CoherentPrefix, level: int, tolerance: float
    ) -> AxiomReport:
        tower = prefix.tower
        if not 0 <= level < tower.depth:
            raise NcgException(
                NcgError(
                    error_code=ErrorCode.CONFIG_INVALID,
                    error_message="corrupt_level must name a level below the top of the tower.",
                    context={"corrupt_level": level, "depth": tower.depth},
                )
            )
        bad = corrupt_prefix(prefix, level, monomial(tower.angle(level), 0, 0, CORRUPTION_AMPLITUDE))
        observed = coherence_check(bad, tower, tolerance, self.settings.workers)
        detected = observed.components[f"level {level}"]
        return AxiomReport(
            axiom="coherence-negative-control",
            residual=max(0.0, DETECTION_MARGIN - detected),
            tolerance=tolerance,
            window=tower.depth,
            components={f"level {level}": detected},
            notes=observed.notes,
        )
