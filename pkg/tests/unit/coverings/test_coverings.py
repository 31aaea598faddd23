"""Unit tests for finite covering projections of the torus.

This module tests the covering angle, the embedding, the deck group action, the
invariant projection, the induced module inner product and the orthogonal splits.
"""

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nctorus.coverings import (
    CoveringParams,
    GroupElement,
    base_angle,
    composite,
    embed,
    group_act,
    group_elements,
    group_sum,
    invariant_average,
    isotypic_decomposition,
    module_inner,
    orthogonal_split,
    restrict,
    theta_prime,
)
from nctorus.errors import NcgException
from nctorus.torus_algebra import (
    AlgebraElement,
    adjoint,
    generators,
    monomial,
    trace_tau0,
    unit,
    zero,
)
from nctorus.utils import ElementGenerator
from tests.strategies import IRRATIONAL_THETA, elements, monomials

THETA = float(IRRATIONAL_THETA)


def coverings():
    """Small covering parameters."""
    order = st.integers(min_value=1, max_value=4)
    return st.builds(CoveringParams, m=order, n=order, k=st.integers(min_value=0, max_value=3))


@pytest.fixture
def cover():
    """The 2 x 3 covering with winding 1."""
    return CoveringParams(m=2, n=3, k=1)


@pytest.fixture
def top(cover):
    """A random element of the covering algebra."""
    return ElementGenerator(11).element(theta_prime(THETA, cover), 6, terms=12)


@pytest.mark.parametrize(
    "theta,params,expected",
    [
        (0.0, (1, 1, 0), 0.0),
        (1.0, (2, 3, 0), 1.0 / 6),
        (1.0, (2, 3, 1), (1.0 + 2 * math.pi) / 6),
    ],
)
def test_theta_prime_examples(theta, params, expected):
    """Test theta' = (theta + 2 pi k) / (m n)."""
    m, n, k = params
    assert theta_prime(theta, CoveringParams(m=m, n=n, k=k)).theta == pytest.approx(expected)


@settings(deadline=None)
@given(coverings())
def test_base_angle_inverts_theta_prime(c):
    """Test that base_angle undoes theta_prime exactly."""
    assert base_angle(theta_prime(THETA, c), c) == theta_prime(THETA, CoveringParams(m=1, n=1))


def test_composite_angle_matches_chain():
    """Test that the composite covering reproduces the chained angle field by field."""
    chain = [CoveringParams(m=2, n=1, k=1), CoveringParams(m=1, n=3, k=2), CoveringParams(m=2, n=2, k=0)]
    angle = theta_prime(THETA, chain[0])
    for c in chain[1:]:
        angle = theta_prime(angle, c)
    big = composite(chain)
    assert (big.m, big.n, big.k) == (4, 6, 1 + 2 * 2)
    assert theta_prime(THETA, big) == angle
    assert big.group_order == math.prod(c.group_order for c in chain)


def test_embed_examples(cover):
    """Test that 1 maps to 1 and u maps to u'^m."""
    u, _ = generators(THETA)
    assert embed(unit(THETA), cover) == unit(theta_prime(THETA, cover))
    image = embed(u, cover)
    assert image.terms == {(2, 0): 1.0}
    assert image.angle == theta_prime(THETA, cover)


@settings(max_examples=50, deadline=None)
@given(coverings(), elements(THETA, radius=5), elements(THETA, radius=5))
def test_embed_is_multiplicative(c, a, b):
    """Test that embed(ab) = embed(a) embed(b) exactly."""
    assert embed(a * b, c) == embed(a, c) * embed(b, c)


@settings(max_examples=200, deadline=None)
@given(coverings(), monomials(radius=40), monomials(radius=40))
def test_embed_phase_identity_on_monomials(c, x, y):
    """Test the symbolic phase identity e^{-i theta' (n s1)(m r2)} = e^{-i theta s1 r2}."""
    a, b = monomial(THETA, *x), monomial(THETA, *y)
    assert embed(a * b, c) == embed(a, c) * embed(b, c)


@settings(deadline=None)
@given(coverings(), elements(THETA, radius=5))
def test_embed_preserves_adjoint(c, a):
    """Test that embed is a *-homomorphism."""
    assert embed(adjoint(a), c) == adjoint(embed(a, c))


def test_group_act_examples():
    """Test the identity action and the sign flip of u' under (1, 0) for m = 2."""
    c = CoveringParams(m=2, n=1)
    u_prime = monomial(theta_prime(THETA, c), 1, 0)
    assert group_act(GroupElement(), u_prime, c) is u_prime
    assert group_act(GroupElement(p=1, q=0), u_prime, c) == u_prime.scale(-1.0)


def test_full_group_sum_kills_generator():
    """Test that the orbit sum of u' vanishes for m >= 2."""
    c = CoveringParams(m=3, n=1)
    u_prime = monomial(theta_prime(THETA, c), 1, 0)
    total = zero(u_prime.angle)
    for g in group_elements(c):
        total = total + group_act(g, u_prime, c)
    assert total.sup_norm() <= 1e-15


def test_group_act_rejects_foreign_residue():
    """Test that a residue outside Z_m x Z_n is rejected."""
    c = CoveringParams(m=2, n=1)
    with pytest.raises(NcgException, match="CONFIG_INVALID"):
        group_act(GroupElement(p=2, q=0), monomial(theta_prime(THETA, c), 1, 0), c)


def test_group_action_composes(cover, top):
    """Test g1 (g2 a) = (g1 + g2) a for every pair of group elements."""
    group = list(group_elements(cover))
    for g1 in group:
        for g2 in group:
            lhs = group_act(g1, group_act(g2, top, cover), cover)
            rhs = group_act(g1.plus(g2, cover), top, cover)
            assert lhs.distance(rhs) <= 1e-15


def test_group_action_is_involutive_and_multiplicative(cover, top):
    """Test g(a*) = (g a)* and g(ab) = g(a) g(b)."""
    other = ElementGenerator(12).element(top.angle, 6, terms=12)
    for g in group_elements(cover):
        assert group_act(g, adjoint(top), cover).distance(adjoint(group_act(g, top, cover))) <= 1e-15
        product = group_act(g, top * other, cover)
        assert product.distance(group_act(g, top, cover) * group_act(g, other, cover)) <= 1e-14


def test_invariant_average_examples(cover):
    """Test invariance of embedded elements, u' -> 0 and idempotence."""
    b = ElementGenerator(3).element(THETA, 5, terms=8)
    image = embed(b, cover)
    assert invariant_average(image, cover) == image
    assert invariant_average(monomial(image.angle, 1, 0), cover).is_zero()
    x = ElementGenerator(4).element(image.angle, 6, terms=20)
    once = invariant_average(x, cover)
    assert invariant_average(once, cover) == once


def test_invariant_average_matches_group_mean(cover, top):
    """Test that the coefficient filter equals (1/|G|) sum_g g a."""
    total = zero(top.angle)
    for g in group_elements(cover):
        total = total + group_act(g, top, cover)
    assert invariant_average(top, cover).distance(total.scale(1.0 / cover.group_order)) <= 1e-12
    assert group_sum(top, cover).distance(total) <= 1e-12


def test_invariant_image_is_embedded_image(cover, top):
    """Test that every invariant element is the embedding of its restriction."""
    invariant = invariant_average(top, cover)
    assert embed(restrict(invariant, cover), cover) == invariant


def test_restrict_rejects_non_invariant_element(cover):
    """Test that only invariant elements can be pulled back."""
    with pytest.raises(NcgException, match="CONFIG_INVALID"):
        restrict(monomial(theta_prime(THETA, cover), 1, 0), cover)


def test_module_inner_examples(cover):
    """Test <u', u'> = 1, <1, u'> = 0 and <embed a, embed b> = a* b."""
    angle = theta_prime(THETA, cover)
    u_prime = monomial(angle, 1, 0)
    assert module_inner(u_prime, u_prime, cover) == unit(THETA)
    assert module_inner(unit(angle), u_prime, cover).is_zero()
    a = ElementGenerator(5).element(THETA, 4, terms=6)
    b = ElementGenerator(6).element(THETA, 4, terms=6)
    assert module_inner(embed(a, cover), embed(b, cover), cover) == adjoint(a) * b


def test_module_inner_properties(cover, top):
    """Test conjugate symmetry, positivity and right linearity over the base."""
    other = ElementGenerator(21).element(top.angle, 6, terms=12)
    forward = module_inner(top, other, cover)
    backward = module_inner(other, top, cover)
    assert forward.distance(adjoint(backward)) <= 1e-12
    assert trace_tau0(module_inner(top, top, cover)).real >= 0.0
    x = ElementGenerator(22).element(THETA, 3, terms=5)
    lhs = module_inner(top, other * embed(x, cover), cover)
    assert lhs.distance(forward * x) <= 1e-12


def test_summed_normalization_scales_by_group_order(cover, top):
    """Test that the summed inner product is |G| times the averaged one."""
    averaged = module_inner(top, top, cover, "averaged")
    summed = module_inner(top, top, cover, "summed")
    assert summed.distance(averaged.scale(float(cover.group_order))) <= 1e-14


def test_orthogonal_split_examples(cover):
    """Test the split of an embedded element and of u'."""
    b = ElementGenerator(8).element(THETA, 4, terms=6)
    image = embed(b, cover)
    invariant, complement = orthogonal_split(image, cover)
    assert invariant == image
    assert complement.is_zero()
    u_prime = monomial(image.angle, 1, 0)
    invariant, complement = orthogonal_split(u_prime, cover)
    assert invariant.is_zero()
    assert complement == u_prime


def test_orthogonal_split_reconstructs_and_is_orthogonal(cover, top):
    """Test exact reconstruction, disjoint supports and module orthogonality."""
    invariant, complement = orthogonal_split(top, cover)
    assert invariant + complement == top
    assert not set(invariant.terms) & set(complement.terms)
    assert module_inner(invariant, complement, cover).is_zero()
    x = ElementGenerator(9).element(THETA, 4, terms=6)
    assert module_inner(embed(x, cover), complement, cover).is_zero()


def test_isotypic_decomposition(cover, top):
    """Test that the character components sum to a and are mutually orthogonal."""
    components = isotypic_decomposition(top, cover)
    total = zero(top.angle)
    for (p, q), part in components.items():
        assert 0 <= p < cover.m and 0 <= q < cover.n
        assert all(r % cover.m == p and s % cover.n == q for r, s in part.terms)
        total = total + part
    assert total == top
    keys = list(components)
    for i, left in enumerate(keys):
        for right in keys[i + 1 :]:
            assert module_inner(components[left], components[right], cover).is_zero()


def test_isotypic_components_are_eigenvectors(cover, top):
    """Test that the component (p, q) transforms by the matching character."""
    g = GroupElement(p=1, q=1)
    for (p, q), part in isotypic_decomposition(top, cover).items():
        phase = cmath.exp(2j * math.pi * (p / cover.m + q / cover.n))
        assert group_act(g, part, cover).distance(part.scale(phase)) <= 1e-14


def test_elements_of_different_covers_do_not_mix(cover):
    """Test that the embedding lands in the covering algebra only."""
    image = embed(unit(THETA), cover)
    with pytest.raises(NcgException, match="THETA_MISMATCH"):
        _ = image + AlgebraElement.from_terms(THETA, {(0, 0): 1.0})
