"""Unit tests for the campaign registry, its configuration and its report."""

import json

import pytest
from pydantic import ValidationError

from nctorus.cli import campaign
from nctorus.cli.campaign import (
    CHECKS,
    PRESET_NAME,
    REPORT_SCHEMA,
    CampaignConfig,
    CheckParams,
    CheckSpec,
    get_check,
    preset,
    run_campaign,
    tower_from_params,
)
from nctorus.config import RuntimeSettings
from nctorus.errors import NcgException
from nctorus.reports import AxiomReport
from nctorus.toolkit import Toolkit


@pytest.fixture
def toolkit():
    """Toolkit with a two-thread pool."""
    return Toolkit(RuntimeSettings(workers=2))


@pytest.fixture
def failing_check(monkeypatch):
    """Register a check that always reports a failure."""

    def check(tk, params, tol):
        return [AxiomReport(axiom="always-fails", residual=1.0, tolerance=0.5)]

    monkeypatch.setitem(CHECKS, "always-fails", check)
    return check


def test_check_params_reject_non_numeric_theta():
    """Test that a non-numeric angle is rejected by name."""
    with pytest.raises(ValidationError, match="theta must be numeric"):
        CheckParams.model_validate({"theta": "abc"})


def test_check_params_reject_zero_tau_im():
    """Test that a degenerate modulus is rejected."""
    with pytest.raises(ValidationError, match="tau_im must be nonzero"):
        CheckParams(tau_im=0.0)


def test_check_params_forbid_unknown_fields():
    """Test that misspelled parameters do not pass silently."""
    with pytest.raises(ValidationError):
        CheckParams.model_validate({"thetta": 1.0})


def test_arguments_include_only_set_values():
    """Test keyword assembly, tau included."""
    params = CheckParams(theta=1.0, tau_re=0.5, tau_im=2.0)
    assert params.arguments("theta", "tau", "window") == {"theta": 1.0, "tau": 0.5 + 2j}
    assert CheckParams().arguments("tau") == {}


@pytest.mark.parametrize(
    "payload,message",
    [
        ({"name": "no-such-check"}, "Unknown check 'no-such-check'"),
        ({"name": "circle-fold", "tolerance": 0}, "tolerance must be positive"),
        ({"name": "circle-fold", "tolerance": -1e-3}, "tolerance must be positive"),
    ],
)
def test_check_spec_validation(payload, message):
    """Test that a bad entry names its offending field."""
    with pytest.raises(ValidationError, match=message):
        CheckSpec.model_validate(payload)


def test_get_check_unknown():
    """Test the error code of an unregistered name."""
    with pytest.raises(NcgException, match="UNKNOWN_CHECK"):
        get_check("no-such-check")


def test_preset_unknown():
    """Test that only the bundled preset is known."""
    with pytest.raises(NcgException, match="CONFIG_INVALID"):
        preset("other")


def test_preset_entries_are_registered():
    """Test that every preset entry names a registered check."""
    config = preset(PRESET_NAME)
    names = {spec.name for spec in config.checks}
    assert names <= set(CHECKS)
    assert {"dirac-spectrum", "torus-completeness", "coherent-tower", "dixmier-functionals"} <= names


def test_tower_from_params_repeats_the_level():
    """Test the depth-copies tower of the flat flags."""
    tower = tower_from_params(CheckParams(m=2, n=3, k=1, theta=1.0, depth=3))
    assert tower.theta0 == 1.0
    assert len(tower.levels) == 3
    assert {(lvl.m, lvl.n, lvl.k) for lvl in tower.levels} == {(2, 3, 1)}


def test_empty_campaign_passes(toolkit):
    """Test that an empty campaign passes vacuously."""
    report = run_campaign(CampaignConfig(), toolkit)
    assert report.passed
    assert report.summary["checks"] == 0


def test_failing_check_fails_the_campaign(toolkit, failing_check):
    """Test that one failing report fails its check and the campaign."""
    config = CampaignConfig.model_validate(
        {"checks": [{"name": "circle-fold", "params": {"grid": 256, "cutoff": 64}}, {"name": "always-fails"}]}
    )
    report = run_campaign(config, toolkit)
    assert not report.passed
    assert [c.name for c in report.checks] == ["circle-fold", "always-fails"]
    assert report.summary == {
        "checks": 2,
        "passed": 1,
        "failed": 1,
        "reports": 2,
        "failed_reports": 1,
    }


def test_report_serialization_is_deterministic(toolkit):
    """Test that two runs agree once timing is dropped."""
    config = CampaignConfig.model_validate(
        {
            "checks": [
                {"name": "circle-fold", "params": {"fold": 2, "grid": 256, "cutoff": 64}},
                {"name": "dirac-spectrum", "params": {"window": 4}},
            ]
        }
    )
    first = run_campaign(config, toolkit).to_json(timing=False)
    second = run_campaign(config, toolkit).to_json(timing=False)
    assert first == second
    payload = json.loads(first)
    assert payload["schema"] == REPORT_SCHEMA
    assert payload["pass"] is True
    assert "wall_clock" not in payload["checks"][0]
    assert payload["config"]["checks"][0]["params"] == {"fold": 2, "grid": 256, "cutoff": 64}


def test_timing_is_reported_by_default(toolkit):
    """Test that each check carries its wall-clock time."""
    config = CampaignConfig.model_validate({"checks": [{"name": "dirac-spectrum", "params": {"window": 3}}]})
    payload = run_campaign(config, toolkit).to_json_dict()
    assert payload["checks"][0]["wall_clock"] >= 0.0


def test_tolerance_override_reaches_the_check(toolkit, monkeypatch):
    """Test that the configured tolerance is forwarded as a keyword."""
    seen = {}

    def check(tk, params, tol):
        seen.update(tol)
        return []

    monkeypatch.setitem(campaign.CHECKS, "recording", check)
    spec = CheckSpec.model_validate({"name": "recording", "tolerance": 1e-3})
    run_campaign(CampaignConfig(checks=[spec]), toolkit)
    assert seen == {"tolerance": 1e-3}


def test_from_path(tmp_path):
    """Test reading a campaign file."""
    path = tmp_path / "campaign.json"
    path.write_text(json.dumps({"checks": [{"name": "circle-fold", "params": {"fold": 5}}]}))
    config = CampaignConfig.from_path(path)
    assert config.checks[0].params.fold == 5
