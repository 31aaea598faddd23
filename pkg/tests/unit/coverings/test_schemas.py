"""Unit tests for the covering schemas.

This module tests validation of covering parameters, deck group elements, tower
descriptions and coherent prefixes.
"""

import math

import pytest
from pydantic import ValidationError

from nctorus.coverings import (
    CoherentPrefix,
    CoveringParams,
    GroupElement,
    InnerTrajectory,
    TowerSpec,
    theta_prime,
)
from nctorus.torus_algebra import monomial, unit


@pytest.fixture
def tower():
    """Two-level tower over theta_0 = 1."""
    return TowerSpec.model_validate(
        {"theta0": 1.0, "levels": [{"m": 2, "n": 1, "k": 0}, {"m": 1, "n": 3, "k": 1}]}
    )


def test_covering_params_defaults():
    """Test that k defaults to zero and the group order is m n."""
    c = CoveringParams(m=2, n=3)
    assert c.k == 0
    assert c.group_order == 6
    assert not c.is_trivial()
    assert CoveringParams(m=1, n=1).is_trivial()


@pytest.mark.parametrize(
    "payload,message",
    [
        ({"m": 0, "n": 1}, "m must be a positive integer"),
        ({"m": 1, "n": -2}, "n must be a positive integer"),
        ({"m": True, "n": 1}, "m must be a positive integer"),
        ({"m": 1.5, "n": 1}, "m must be a positive integer"),
        ({"m": 1, "n": 1, "k": -1}, "k must be a nonnegative integer"),
    ],
)
def test_covering_params_rejects_invalid_orders(payload, message):
    """Test that orders must be positive integers and the winding nonnegative."""
    with pytest.raises(ValidationError, match=message):
        CoveringParams(**payload)


def test_covering_params_is_frozen():
    """Test that covering parameters are immutable."""
    c = CoveringParams(m=2, n=2)
    with pytest.raises(ValidationError):
        c.m = 3


def test_group_element_reduction_and_law():
    """Test reduction of integers to residues and the group law of Z_m x Z_n."""
    c = CoveringParams(m=3, n=2)
    g = GroupElement.of(4, -1, c)
    assert (g.p, g.q) == (1, 1)
    assert g.plus(GroupElement(p=2, q=1), c) == GroupElement(p=0, q=0)
    assert GroupElement().is_identity()
    assert g.fits(c)
    assert not GroupElement(p=3, q=0).fits(c)


def test_group_element_rejects_negative_residue():
    """Test that residues are nonnegative."""
    with pytest.raises(ValidationError, match="nonnegative residue"):
        GroupElement(p=-1, q=0)


def test_tower_angles_follow_theta_prime(tower):
    """Test that the level angles are obtained by iterating theta_prime."""
    assert tower.depth == 2
    assert tower.angle(0).theta == 1.0
    assert tower.angle(1) == theta_prime(1.0, tower.levels[0])
    assert tower.angle(2) == theta_prime(tower.angle(1), tower.levels[1])
    assert tower.angle(2).theta == pytest.approx((1.0 / 2 + 2 * math.pi) / 3)


def test_tower_cumulative_orders(tower):
    """Test the cumulative orders M_k, N_k."""
    assert tower.cumulative_orders(0) == (1, 1)
    assert tower.cumulative_orders(1) == (2, 1)
    assert tower.cumulative_orders(2) == (2, 3)


def test_tower_json_round_trip(tower):
    """Test the tower interchange format."""
    payload = tower.to_json_dict()
    assert payload == {
        "theta0": 1.0,
        "levels": [{"m": 2, "n": 1, "k": 0}, {"m": 1, "n": 3, "k": 1}],
    }
    assert TowerSpec.model_validate(payload) == tower


@pytest.mark.parametrize("theta0", ["1.0", None])
def test_tower_rejects_non_numeric_base_angle(theta0):
    """Test that theta0 must be a number."""
    with pytest.raises(ValidationError, match="theta0"):
        TowerSpec.model_validate({"theta0": theta0, "levels": []})


def test_coherent_prefix_validates_length(tower):
    """Test that a prefix needs one element per level."""
    with pytest.raises(ValidationError, match="prefix needs 3 elements, got 2"):
        CoherentPrefix(tower=tower, elements=[unit(tower.angle(0)), unit(tower.angle(1))])


def test_coherent_prefix_validates_angles(tower):
    """Test that every element must live at its level's angle."""
    elements = [unit(tower.angle(0)), unit(tower.angle(0)), unit(tower.angle(2))]
    with pytest.raises(ValidationError, match="level 1 has the wrong angle"):
        CoherentPrefix(tower=tower, elements=elements)


def test_coherent_prefix_accepts_tower_payload(tower):
    """Test that the tower may be given in its JSON form."""
    elements = [unit(tower.angle(k)) for k in range(3)]
    prefix = CoherentPrefix(tower=tower.to_json_dict(), elements=elements)
    assert prefix.depth == 2
    assert prefix.tower == tower


def test_inner_trajectory_spread():
    """Test the constancy diagnostic of an inner-product trajectory."""
    values = [unit(1.0), unit(1.0), monomial(1.0, 0, 0, 1.0 + 1e-12)]
    trajectory = InnerTrajectory(values=values, differences=[0.0, 1e-12], normalization="summed")
    assert trajectory.spread == pytest.approx(1e-12, rel=1e-3)
    assert trajectory.is_constant(1e-10)
    assert not trajectory.is_constant(1e-13)
