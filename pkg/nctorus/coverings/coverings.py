"""Coverings: finite covering projections A_theta -> A_theta' of the torus.

The embedding sends u -> u'^m, v -> v'^n, relocating coefficients (r, s) -> (m r, n s).
The deck group Z_m x Z_n acts on A_theta' by the phases e^{2 pi i (p r / m + q s / n)},
and A_theta is exactly its fixed-point subalgebra.
"""

import logging
from enum import Enum
from typing import Iterator, Optional, Union

import numpy as np

from nctorus.errors import ErrorCode, NcgError, NcgException
from nctorus.torus_algebra import AlgebraElement, DeformationAngle, adjoint

from .schemas import CoveringParams, GroupElement

logger = logging.getLogger(__name__)

AngleLike = Union[float, DeformationAngle]


class Normalization(str, Enum):
    """Normalization of the induced module inner product."""

    AVERAGED = "averaged"
    SUMMED = "summed"


def theta_prime(theta: AngleLike, c: CoveringParams) -> DeformationAngle:
    """Covering angle (theta + 2 pi k) / (m n), kept in exact symbolic form."""
    angle = DeformationAngle.of(theta)
    return DeformationAngle(
        base=angle.base,
        winding=angle.winding + c.k * angle.denominator,
        denominator=angle.denominator * c.m * c.n,
    )


def base_angle(theta_cover: AngleLike, c: CoveringParams) -> DeformationAngle:
    """Inverse of theta_prime: the angle of the algebra covered by theta_cover."""
    angle = DeformationAngle.of(theta_cover)
    order = c.m * c.n
    if angle.denominator % order == 0:
        denominator = angle.denominator // order
        return DeformationAngle(
            base=angle.base,
            winding=angle.winding - c.k * denominator,
            denominator=denominator,
        )
    return DeformationAngle.of(angle.theta * order - 2 * np.pi * c.k)


def composite(levels: list[CoveringParams]) -> CoveringParams:
    """Single covering equivalent to a chain of coverings.

    M = prod m_l, N = prod n_l and K = sum k_l prod_{l' < l} m_l' n_l', so that
    theta_prime along the chain equals theta_prime of the composite.
    """
    big_m, big_n, big_k, scale = 1, 1, 0, 1
    for c in levels:
        big_k += c.k * scale
        scale *= c.m * c.n
        big_m *= c.m
        big_n *= c.n
    return CoveringParams(m=big_m, n=big_n, k=big_k)


def embed(a: AlgebraElement, c: CoveringParams) -> AlgebraElement:
    """Unital *-homomorphism A_theta -> A_theta', w(r, s) -> w(m r, n s)."""
    return AlgebraElement._trusted(
        theta_prime(a.angle, c),
        np.stack([a.r * c.m, a.s * c.n], axis=1),
        a.amplitudes.copy(),
    )


def group_elements(c: CoveringParams) -> Iterator[GroupElement]:
    """All deck transformations, identity first."""
    for p in range(c.m):
        for q in range(c.n):
            yield GroupElement(p=p, q=q)


def _roots_of_unity(order: int) -> np.ndarray:
    """e^{2 pi i j / order} with exact conjugate symmetry j <-> order - j."""
    j = np.arange(order)
    roots = np.exp(2j * np.pi * j / order)
    half = (order + 1) // 2
    roots[half:] = np.conj(roots[1 : order - half + 1][::-1])
    if order % 2 == 0:
        roots[order // 2] = -1.0
    roots[0] = 1.0
    return roots


def _require_fits(g: GroupElement, c: CoveringParams) -> None:
    if not g.fits(c):
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CONFIG_INVALID,
                error_message="Group element is not a residue of the covering group.",
                context={"p": g.p, "q": g.q, "m": c.m, "n": c.n},
            )
        )


def group_phases(g: GroupElement, r: np.ndarray, s: np.ndarray, c: CoveringParams) -> np.ndarray:
    """Characters e^{2 pi i (p r / m + q s / n)} evaluated on exponent arrays."""
    _require_fits(g, c)
    return (
        _roots_of_unity(c.m)[(g.p * np.asarray(r)) % c.m]
        * _roots_of_unity(c.n)[(g.q * np.asarray(s)) % c.n]
    )


def group_act(g: GroupElement, a: AlgebraElement, c: CoveringParams) -> AlgebraElement:
    """Deck transformation a_rs -> e^{2 pi i (p r / m + q s / n)} a_rs, a *-automorphism."""
    if g.is_identity():
        return a
    return a.map_amplitudes(group_phases(g, a.r, a.s, c))


def _filter(a: AlgebraElement, keep: np.ndarray) -> AlgebraElement:
    return AlgebraElement._trusted(a.angle, a.indices[keep].copy(), a.amplitudes[keep].copy())


def _invariant_mask(a: AlgebraElement, c: CoveringParams) -> np.ndarray:
    return (a.r % c.m == 0) & (a.s % c.n == 0)


def invariant_average(a: AlgebraElement, c: CoveringParams) -> AlgebraElement:
    """Projection (1/|G|) sum_g g a onto the fixed-point algebra.

    It keeps exactly the coefficients with m | r and n | s.
    """
    return _filter(a, _invariant_mask(a, c))


def group_sum(a: AlgebraElement, c: CoveringParams) -> AlgebraElement:
    """sum_g g a, computed as |G| times the invariant part."""
    return invariant_average(a, c).scale(float(c.group_order))


def restrict(
    a: AlgebraElement, c: CoveringParams, angle: Optional[DeformationAngle] = None
) -> AlgebraElement:
    """Pull an invariant element back through the embedding, w(m r, n s) -> w(r, s).

    The result lives at base_angle(a.angle, c) unless a target angle is given.

    Raises:
        NcgException: CONFIG_INVALID when a is not in the image of the embedding.
    """
    if not np.all(_invariant_mask(a, c)):
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CONFIG_INVALID,
                error_message="Element is not invariant under the covering group.",
                context={"m": c.m, "n": c.n},
            )
        )
    return AlgebraElement._trusted(
        base_angle(a.angle, c) if angle is None else angle,
        np.stack([a.r // c.m, a.s // c.n], axis=1),
        a.amplitudes.copy(),
    )


def module_inner(
    a: AlgebraElement,
    b: AlgebraElement,
    c: CoveringParams,
    normalization: Union[Normalization, str] = Normalization.AVERAGED,
) -> AlgebraElement:
    """Induced A_theta-valued inner product on A_theta'.

    The averaged form is (1/|G|) sum_g g(a* b); the summed form drops 1/|G|.
    The G-invariant result is pulled back to the base algebra.
    """
    normalization = Normalization(normalization)
    invariant = invariant_average(adjoint(a) * b, c)
    if normalization is Normalization.SUMMED:
        invariant = invariant.scale(float(c.group_order))
    return restrict(invariant, c)


def orthogonal_split(
    a: AlgebraElement, c: CoveringParams
) -> tuple[AlgebraElement, AlgebraElement]:
    """Split a into its invariant part and the module-orthogonal complement.

    The parts have disjoint coefficient supports and sum to a exactly.
    """
    mask = _invariant_mask(a, c)
    return _filter(a, mask), _filter(a, ~mask)


def isotypic_decomposition(
    a: AlgebraElement, c: CoveringParams
) -> dict[tuple[int, int], AlgebraElement]:
    """Components of a indexed by the characters (r mod m, s mod n).

    Only nonzero components are returned.
    """
    classes = np.stack([a.r % c.m, a.s % c.n], axis=1)
    components = {}
    for key in sorted({(int(x), int(y)) for x, y in classes}):
        mask = (classes[:, 0] == key[0]) & (classes[:, 1] == key[1])
        components[key] = _filter(a, mask)
    return components
