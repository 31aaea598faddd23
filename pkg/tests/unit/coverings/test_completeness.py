"""Unit tests for the covering completeness identity on the torus."""

import logging

import pytest

from nctorus.coverings import (
    CoveringParams,
    covering_partition_elements,
    group_act,
    group_elements,
    theta_prime,
    verify_covering_completeness,
)
from nctorus.errors import NcgException
from nctorus.torus_algebra import adjoint, unit, zero
from tests.strategies import IRRATIONAL_THETA

THETA = float(IRRATIONAL_THETA)


def test_trivial_cover_reduces_to_partition_identity():
    """Test that the trivial cover satisfies the identity to truncation accuracy."""
    report = verify_covering_completeness(CoveringParams(m=1, n=1), 256)
    assert report.axiom == "covering-completeness"
    assert report.components.keys() == {"g=(0,0)"}
    assert report.residual <= 1e-10
    assert report.passed


def test_two_by_three_cover_at_cutoff_256():
    """Test that every group-twisted sum of the 2 x 3 cover is within 1e-8."""
    report = verify_covering_completeness(CoveringParams(m=2, n=3, k=1), 256, theta=1.0, workers=2)
    assert len(report.components) == 6
    assert all(value <= 1e-8 for value in report.components.values())
    assert report.residual <= report.tolerance
    assert report.tolerance <= 1e-8
    assert report.passed
    assert "cutoff-too-small" not in report.notes
    assert "index set I_m x I_n" in report.notes


def test_factorized_sum_matches_direct_products():
    """Test the fast evaluation against sum_iota e'_iota (g e_iota) multiplied out in the algebra."""
    c = CoveringParams(m=2, n=1, k=1)
    report = verify_covering_completeness(c, 8, theta=THETA, grid=64, exhaustive=True)
    pairs = covering_partition_elements(c, 8, theta=THETA, grid=64)
    angle = theta_prime(THETA, c)
    assert len(pairs) == 4 * 2
    for g in group_elements(c):
        total = zero(angle)
        for e, e_prime in pairs:
            total = total + e_prime * group_act(g, e, c)
        target = unit(angle) if g.is_identity() else zero(angle)
        expected = total.distance(target)
        assert report.components[f"g=({g.p},{g.q})"] == pytest.approx(expected, rel=1e-9, abs=1e-13)


def test_partition_elements_are_paired_with_adjoints():
    """Test that e'_iota = e_iota* and that the elements live at theta'."""
    c = CoveringParams(m=1, n=2)
    pairs = covering_partition_elements(c, 8, theta=THETA, grid=64)
    assert len(pairs) == 2 * 4
    for e, e_prime in pairs:
        assert e.angle == theta_prime(THETA, c)
        assert e_prime == adjoint(e)


def test_small_cutoff_is_flagged(caplog):
    """Test that a coarse cutoff is reported through a warning and a note."""
    with caplog.at_level(logging.WARNING, logger="nctorus.coverings.completeness"):
        report = verify_covering_completeness(CoveringParams(m=2, n=1), 8, grid=64)
    assert "cutoff-too-small" in report.notes
    assert report.tolerance > 1e-8
    assert "too small" in caplog.text


@pytest.mark.parametrize("cutoff", [0, 7])
def test_cutoff_below_minimum_is_rejected(cutoff):
    """Test that cutoffs below 8 are rejected."""
    with pytest.raises(NcgException, match="RESOLUTION"):
        verify_covering_completeness(CoveringParams(m=1, n=1), cutoff)
