"""Unit tests for SpectralService class."""

from unittest.mock import MagicMock, patch

import pytest

from nctorus.config import RuntimeSettings
from nctorus.services.spectral import SpectralService
from nctorus.utils import GENERATOR_VERSION
from tests.strategies import IRRATIONAL_THETA

THETA = float(IRRATIONAL_THETA)


@pytest.fixture
def mock_settings():
    """Mock RuntimeSettings with two workers."""
    mock = MagicMock(spec=RuntimeSettings)
    mock.workers = 2
    mock.rng_version = GENERATOR_VERSION
    return mock


@pytest.fixture
def spectral_service(mock_settings):
    """Fixture to create a SpectralService instance with mocked settings."""
    return SpectralService(settings=mock_settings)


def test_spectrum_lists_the_kernel_first(spectral_service):
    """Test that spectrum wraps the block diagonalization."""
    spectrum = spectral_service.spectrum(1j, window=3)
    assert spectrum[0] == (0.0, 2)
    assert sum(k for _, k in spectrum) == 2 * 49


@pytest.mark.parametrize("tau,m,n", [(1j, 1, 1), (0.5 + 1j, 2, 3)])
def test_verify_spectrum(spectral_service, tau, m, n):
    """Test the numerical spectrum against the closed form and the kernel dimension."""
    report = spectral_service.verify_spectrum(tau, 0.0, m, n, window=6)
    assert report.axiom == "dirac-spectrum"
    assert report.passed
    assert report.components["kernel"] == 0.0
    assert report.components["eigenvalues"] <= 1e-10
    assert report.notes == ["kernel dimension 2", f"{2 * 13 * 13} eigenvalues"]


def test_verify_triple_axioms_on_a_small_batch(spectral_service):
    """Test that the batch reports come in order and pass."""
    reports = spectral_service.verify_triple_axioms(
        THETA, 0.3 + 1.2j, window=12, guard=6, pairs=3, support=3, seed=1
    )
    assert [r.axiom for r in reports[:5]] == [
        "first-order",
        "real-structure",
        "J^2 = -1",
        "JD = DJ",
        "J Gamma = -Gamma J",
    ]
    assert all(r.passed for r in reports)
    assert set(reports[0].components) == {"pair 0", "pair 1", "pair 2"}
    assert reports[0].notes == ["3 seeded pairs of support 3, seed 1"]
    assert reports[0].window == 12 and reports[0].guard == 6


def test_verify_local_covering_delegates(spectral_service):
    """Test that the local covering check is forwarded at theta = 0."""
    with patch("nctorus.services.spectral.local_covering_check_theta0") as check:
        result = spectral_service.verify_local_covering(2, 1, grid=128)
    check.assert_called_once_with(2, 1, 128, 1j, 0.0, 1e-6, 0)
    assert result is check.return_value


def test_verify_seminorms(spectral_service):
    """Test monotonicity in s and window stability of the first order."""
    report = spectral_service.verify_seminorms(THETA, max_order=3, window=6)
    assert report.axiom == "seminorms"
    assert report.passed
    assert report.components["monotonicity"] == 0.0
    assert report.components["order 1 window growth"] <= 1e-6
    assert len(report.notes) == 3
    assert report.notes[0].startswith("||u + v||_1 = ")
