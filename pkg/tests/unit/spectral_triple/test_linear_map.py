"""Unit tests for matrix-free operator handles and the norm estimator.

This module tests handle algebra (composition, sums, scaling, adjoints) and the
power-iteration estimate with its retry-on-non-convergence policy.
"""

import logging

import numpy as np
import pytest

from nctorus.errors import NcgException
from nctorus.spectral_triple import (
    GnsWindow,
    LinearMapHandle,
    Linearity,
    identity_handle,
    op_norm_estimate,
    real_structure,
)
from nctorus.torus_algebra import DeformationAngle


@pytest.fixture
def window():
    """Small window without guard."""
    return GnsWindow(radius=4)


def diagonal_handle(window, weights):
    """Linear handle multiplying every block by a fixed weight vector."""
    return LinearMapHandle(
        label="diag",
        window=window,
        blocks=2,
        forward=lambda x: x * weights,
        backward=lambda y: y * np.conj(weights),
    )


def test_identity_norm_is_one(window):
    """Test that the identity has unit norm and converges immediately."""
    estimate = op_norm_estimate(identity_handle(window))
    assert estimate.value == pytest.approx(1.0, abs=1e-14)
    assert estimate.converged
    assert float(estimate) == estimate.value


def test_zero_operator_has_zero_norm(window):
    """Test that an exactly vanishing image returns zero."""
    zero = identity_handle(window) - identity_handle(window)
    estimate = op_norm_estimate(zero)
    assert estimate.value == 0.0
    assert estimate.converged


def test_diagonal_norm(window):
    """Test the estimate against the largest weight of a diagonal operator."""
    weights = np.linspace(0.1, 3.0, window.dimension)
    estimate = op_norm_estimate(diagonal_handle(window, weights), iterations=2000, rtol=1e-14)
    assert estimate.value == pytest.approx(3.0, rel=1e-6)


def test_interior_compression_restricts_domain(window):
    """Test that only interior basis vectors are probed."""
    weights = np.where(window.mask(2), 1.0, 10.0)
    estimate = op_norm_estimate(diagonal_handle(window, weights), interior_radius=2)
    assert estimate.value == pytest.approx(1.0, abs=1e-12)
    assert estimate.interior_radius == 2


def test_non_convergence_returns_last_iterate_with_warning(window, caplog):
    """Test that an exhausted budget yields converged=False and a warning."""
    weights = np.linspace(0.5, 1.0, window.dimension)
    with caplog.at_level(logging.WARNING):
        estimate = op_norm_estimate(
            diagonal_handle(window, weights), iterations=1, rtol=1e-15
        )
    assert not estimate.converged
    assert estimate.iterations == 7
    assert 0.5 < estimate.value <= 1.0
    assert "did not converge" in caplog.text


def test_composition_and_scaling_adjoints(window):
    """Test that composite handles carry consistent adjoints."""
    rng = np.random.default_rng(1)
    a = diagonal_handle(window, rng.normal(size=window.dimension) + 1j)
    b = diagonal_handle(window, rng.normal(size=window.dimension) - 2j)
    composite = (2 - 1j) * (a @ b) + b
    x = rng.normal(size=(2, window.dimension)) + 1j * rng.normal(size=(2, window.dimension))
    y = rng.normal(size=(2, window.dimension)) + 1j * rng.normal(size=(2, window.dimension))
    lhs = np.vdot(composite.apply(x), y)
    rhs = np.vdot(x, composite.adjoint().apply(y))
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_antilinear_composition_flips_linearity(window):
    """Test that J composed with J is linear and J alone is antilinear."""
    j = real_structure(window, DeformationAngle.of(0.4))
    assert j.linearity == Linearity.ANTILINEAR
    assert (j @ j).linearity == Linearity.LINEAR
    assert j.linearity_residual() <= 1e-14
    assert (j @ j).linearity_residual() <= 1e-14


def test_mixed_sum_is_rejected(window):
    """Test that a linear and an antilinear map cannot be added."""
    j = real_structure(window, DeformationAngle.of(0.4))
    with pytest.raises(NcgException, match="NOT_LINEAR"):
        j + identity_handle(window)


def test_antilinear_handles_do_not_convert(window):
    """Test that only linear handles become scipy LinearOperators."""
    j = real_structure(window, DeformationAngle.of(0.4))
    with pytest.raises(NcgException, match="NOT_LINEAR"):
        op_norm_estimate(j)


def test_mismatched_spaces_are_rejected(window):
    """Test that handles on different windows cannot be composed."""
    other = identity_handle(GnsWindow(radius=5))
    with pytest.raises(NcgException, match="WINDOW_MISMATCH"):
        identity_handle(window) @ other


def test_linear_operator_shape(window):
    """Test the scipy LinearOperator wrapper."""
    op = identity_handle(window, blocks=4).as_linear_operator()
    assert op.shape == (4 * window.dimension, 4 * window.dimension)
    v = np.arange(4 * window.dimension, dtype=complex)
    assert np.array_equal(op.matvec(v), v)
