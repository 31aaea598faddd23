"""Unit tests for Toolkit and its services."""

import pytest

from nctorus import Toolkit
from nctorus.config import RuntimeSettings
from nctorus.services import (
    CircleService,
    CoveringService,
    DixmierService,
    SpectralService,
)


@pytest.fixture
def toolkit():
    """Creates a Toolkit instance for testing."""
    return Toolkit(RuntimeSettings(workers=2))


def test_settings_instance(toolkit):
    """Test that the settings are shared by every service."""
    assert isinstance(toolkit.settings, RuntimeSettings)
    for service in (toolkit.spectral, toolkit.coverings, toolkit.circle, toolkit.dixmier):
        assert service.settings is toolkit.settings


def test_spectral_service_instance(toolkit):
    """Test that the spectral service is an instance of SpectralService."""
    assert isinstance(toolkit.spectral, SpectralService)


def test_coverings_service_instance(toolkit):
    """Test that the coverings service is an instance of CoveringService."""
    assert isinstance(toolkit.coverings, CoveringService)


def test_circle_service_instance(toolkit):
    """Test that the circle service is an instance of CircleService."""
    assert isinstance(toolkit.circle, CircleService)


def test_dixmier_service_instance(toolkit):
    """Test that the dixmier service is an instance of DixmierService."""
    assert isinstance(toolkit.dixmier, DixmierService)


def test_aliases(toolkit):
    """Test the convenience aliases."""
    assert toolkit.spectrum == toolkit.spectral.spectrum
    assert toolkit.integral == toolkit.dixmier.integral


def test_default_settings_come_from_environment(monkeypatch):
    """Test that a Toolkit without settings reads NCG_WORKERS."""
    monkeypatch.setenv("NCG_WORKERS", "3")
    assert Toolkit().settings.workers == 3
