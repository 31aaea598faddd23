from .campaign import (
    CHECKS,
    PRESET_NAME,
    REPORT_SCHEMA,
    CampaignConfig,
    CampaignReport,
    CheckParams,
    CheckResult,
    CheckSpec,
    get_check,
    preset,
    run_campaign,
    run_check,
)
from .main import build_parser, main

__all__ = [
    "CHECKS",
    "PRESET_NAME",
    "REPORT_SCHEMA",
    "CampaignConfig",
    "CampaignReport",
    "CheckParams",
    "CheckResult",
    "CheckSpec",
    "build_parser",
    "get_check",
    "main",
    "preset",
    "run_campaign",
    "run_check",
]
