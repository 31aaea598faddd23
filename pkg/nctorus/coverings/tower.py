"""Towers of coverings and coherent sequences along them.

A prefix a_0, ..., a_K is coherent when a_k = sum_{g in G(A_{k+1}|A_k)} g a_{k+1}
for every k < K. Prefixes are the only finite representatives of coherent
sequences, so norm convergence of the inner products is reported as a Cauchy
diagnostic over the available depths.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Union

import numpy as np

from nctorus.errors import ErrorCode, NcgError, NcgException
from nctorus.reports import AxiomReport
from nctorus.torus_algebra import AlgebraElement
from nctorus.utils.random_elements import ElementGenerator

from .coverings import Normalization, composite, group_sum, module_inner, restrict
from .schemas import CoherentPrefix, CoveringParams, GroupElement, InnerTrajectory, TowerSpec

logger = logging.getLogger(__name__)

DEFAULT_COHERENCE_TOLERANCE = 1e-12


def _require_level_angle(a: AlgebraElement, level: int, tower: TowerSpec) -> None:
    if a.angle != tower.angle(level):
        raise NcgException(
            NcgError(
                error_code=ErrorCode.THETA_MISMATCH,
                error_message="Element does not live at the angle of its tower level.",
                context={"level": level, "theta": a.theta, "expected": tower.angle(level).theta},
            )
        )


def _require_same_tower(p: CoherentPrefix, tower: TowerSpec) -> None:
    if p.tower != tower:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CONFIG_INVALID,
                error_message="Prefixes must share the same tower.",
                context={"left": p.tower.to_json_dict(), "right": tower.to_json_dict()},
            )
        )


def segment(tower: TowerSpec, start: int, stop: int) -> CoveringParams:
    """Composite covering from level start up to level stop."""
    return composite(tower.levels[start:stop])


def descend(a_next: AlgebraElement, level: int, tower: TowerSpec) -> AlgebraElement:
    """Level-k element sum_{g in G(A_{k+1}|A_k)} g a_{k+1}.

    Args:
        a_next: Element at theta_{k+1}.
        level: Target level k, 0 <= k < depth.
        tower: The tower.

    Returns:
        AlgebraElement: The surviving residue class, rescaled by the relative group order.
    """
    if not 0 <= level < tower.depth:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CONFIG_INVALID,
                error_message="Level out of range for the tower.",
                context={"level": level, "depth": tower.depth},
            )
        )
    _require_level_angle(a_next, level + 1, tower)
    c = tower.levels[level]
    return restrict(group_sum(a_next, c), c, angle=tower.angle(level))


def descent_prefix(top: AlgebraElement, tower: TowerSpec) -> CoherentPrefix:
    """Coherent prefix generated by descending a single top-level element."""
    _require_level_angle(top, tower.depth, tower)
    elements = [top]
    for level in range(tower.depth - 1, -1, -1):
        elements.append(descend(elements[-1], level, tower))
    return CoherentPrefix(tower=tower, elements=elements[::-1])


def translate_orthogonal_element(tower: TowerSpec, seed: int = 0) -> AlgebraElement:
    """Top element sum_{0 <= j < M_K, 0 <= l < N_K} c_jl w(j, l) with |c_jl| = 1 / (M_K N_K).

    Its deck translates are mutually orthogonal, and the summed inner product of
    every level of its descent prefix is 1.
    """
    big_m, big_n = tower.cumulative_orders(tower.depth)
    j, l = np.meshgrid(np.arange(big_m), np.arange(big_n), indexing="ij")
    phases = ElementGenerator(seed).phases(big_m * big_n)
    return AlgebraElement.build(
        tower.angle(tower.depth), j, l, phases / float(big_m * big_n)
    )


def corrupt_prefix(
    prefix: CoherentPrefix, level: int, element: AlgebraElement
) -> CoherentPrefix:
    """Copy of the prefix with ``element`` added at one level."""
    elements = list(prefix.elements)
    elements[level] = elements[level] + element
    return CoherentPrefix(tower=prefix.tower, elements=elements)


def quotient_map(
    g: GroupElement, tower: TowerSpec, source: int, target: int
) -> GroupElement:
    """Epimorphism G_source -> G_target between the cumulative deck groups."""
    if not 0 <= target <= source <= tower.depth:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CONFIG_INVALID,
                error_message="Quotient maps go from a deeper level to a shallower one.",
                context={"source": source, "target": target, "depth": tower.depth},
            )
        )
    return GroupElement.of(g.p, g.q, segment(tower, 0, target))


def coherence_check(
    p: CoherentPrefix,
    t: Union[TowerSpec, None] = None,
    tolerance: float = DEFAULT_COHERENCE_TOLERANCE,
    workers: int = 1,
) -> AxiomReport:
    """Residual of a_k = sum_g g a_{k+1} at every level of a prefix.

    Levels whose residual exceeds the tolerance are named in the notes.
    """
    tower = p.tower if t is None else t
    _require_same_tower(p, tower)

    def level_residual(level: int) -> float:
        expected = descend(p.elements[level + 1], level, tower)
        return p.elements[level].distance(expected)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        residuals = list(pool.map(level_residual, range(tower.depth)))
    components = {f"level {k}": r for k, r in enumerate(residuals)}
    notes = [f"level {k} violates descent" for k, r in enumerate(residuals) if r > tolerance]
    if notes:
        logger.info("Prefix incoherent at %d level(s)", len(notes))
    return AxiomReport(
        axiom="coherence",
        residual=max(residuals, default=0.0),
        tolerance=tolerance,
        window=tower.depth,
        components=components,
        notes=notes,
    )


def limit_inner_estimate(
    p: CoherentPrefix,
    q: CoherentPrefix,
    normalization: Union[Normalization, str] = Normalization.SUMMED,
) -> InnerTrajectory:
    """Trajectory <a_k, b_k> over the composite cover of theta_k, pulled back to theta_0.

    The successive-difference norms are a Cauchy diagnostic for the limit inner
    product; with summed normalization a descent prefix gives a constant trajectory.
    """
    _require_same_tower(p, q.tower)
    normalization = Normalization(normalization)
    tower = p.tower
    values = [
        module_inner(
            p.elements[k], q.elements[k], segment(tower, 0, k), normalization
        )
        for k in range(tower.depth + 1)
    ]
    differences = [values[k].distance(values[k - 1]) for k in range(1, len(values))]
    return InnerTrajectory(
        values=values, differences=differences, normalization=normalization.value
    )
