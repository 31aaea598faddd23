"""Verification campaigns: configuration, the check registry and report assembly.

A campaign is a list of named checks with flat parameters. Checks run on a bounded
thread pool; the report lists them in configured order and carries the schema tag
``ncg-report/1``.
"""

import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from nctorus.coverings import CoveringParams, TowerSpec
from nctorus.errors import ErrorCode, NcgError, NcgException
from nctorus.reports import AxiomReport
from nctorus.toolkit import Toolkit

logger = logging.getLogger(__name__)

REPORT_SCHEMA = "ncg-report/1"
PRESET_NAME = "reference-identities"


class CheckParams(BaseModel):
    """Flat parameters of one check; unset values fall back to the check defaults."""

    theta: Optional[float] = None
    tau_re: Optional[float] = None
    tau_im: Optional[float] = None
    m: Optional[int] = None
    n: Optional[int] = None
    k: Optional[int] = None
    window: Optional[int] = None
    guard: Optional[int] = None
    grid: Optional[int] = None
    cutoff: Optional[int] = None
    lambda_max: Optional[float] = None
    fold: Optional[int] = None
    depth: Optional[int] = None
    seed: Optional[int] = None
    pairs: Optional[int] = None
    count: Optional[int] = None
    support: Optional[int] = None
    max_order: Optional[int] = None
    corrupt_level: Optional[int] = None
    exhaustive: Optional[bool] = None
    tower: Optional[TowerSpec] = None

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={"example": {"theta": 1.0, "tau_im": 1.0, "m": 2, "n": 3, "k": 1}},
    )

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Reject non-numeric angles and a real tau."""
        if not isinstance(values, dict):
            return values
        cls._validate_theta(values)
        cls._validate_tau(values)
        return values

    @classmethod
    def _validate_theta(cls, values):
        theta = values.get("theta")
        if theta is None:
            return values
        if isinstance(theta, (str, bytes, bool)) or not isinstance(theta, (int, float)):
            raise ValueError(f"theta must be numeric, got '{theta}'")
        if not math.isfinite(theta):
            raise ValueError(f"theta must be finite, got '{theta}'")
        return values

    @classmethod
    def _validate_tau(cls, values):
        tau_im = values.get("tau_im")
        if tau_im is not None and not isinstance(tau_im, (str, bytes)) and tau_im == 0:
            raise ValueError("tau_im must be nonzero")
        return values

    @property
    def tau(self) -> Optional[complex]:
        """tau = tau_re + i tau_im, or None when tau_im is unset."""
        if self.tau_im is None:
            return None
        return complex(self.tau_re or 0.0, self.tau_im)

    def arguments(self, *names: str) -> dict[str, Any]:
        """Keyword arguments among ``names`` that are set, tau included."""
        out: dict[str, Any] = {}
        for name in names:
            value = self.tau if name == "tau" else getattr(self, name)
            if value is not None:
                out[name] = value
        return out


def _given(value: Any, default: Any) -> Any:
    return default if value is None else value


CheckFn = Callable[[Toolkit, CheckParams, dict[str, Any]], list[AxiomReport]]


def _dirac_spectrum(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    return [tk.spectral.verify_spectrum(**p.arguments("tau", "theta", "m", "n", "window"), **tol)]


def _triple_axioms(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    names = ("theta", "tau", "window", "guard", "pairs", "support", "seed")
    return tk.spectral.verify_triple_axioms(**p.arguments(*names), **tol)


def _local_covering(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    args = p.arguments("grid", "tau", "seed")
    return [tk.spectral.verify_local_covering(_given(p.m, 1), _given(p.n, 1), **args, **tol)]


def _seminorms(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    args = p.arguments("theta", "tau", "max_order", "window", "seed")
    return [tk.spectral.verify_seminorms(**args, **tol)]


def _torus_completeness(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    if tol:
        logger.info("torus-completeness derives its tolerance from the Fourier tails")
    args = p.arguments("k", "theta", "cutoff", "grid", "exhaustive")
    return [tk.coverings.verify_completeness(_given(p.m, 1), _given(p.n, 1), **args)]


def _embedding(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    args = p.arguments("k", "theta", "pairs", "seed")
    return [tk.coverings.verify_embedding(_given(p.m, 1), _given(p.n, 1), **args, **tol)]


def _module_decomposition(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    args = p.arguments("k", "theta", "count", "seed")
    return [tk.coverings.verify_decomposition(_given(p.m, 1), _given(p.n, 1), **args, **tol)]


def tower_from_params(p: CheckParams) -> TowerSpec:
    """The configured tower, or ``depth`` copies of (m, n, k) over theta."""
    if p.tower is not None:
        return p.tower
    level = CoveringParams(m=_given(p.m, 2), n=_given(p.n, 1), k=_given(p.k, 0))
    return TowerSpec(theta0=_given(p.theta, 0.0), levels=[level] * _given(p.depth, 1))


def _coherent_tower(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    args = p.arguments("seed", "corrupt_level")
    return tk.coverings.coherent_tower(tower_from_params(p), **args, **tol)


def _circle_fold(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    return [tk.circle.verify_fold(_given(p.fold, 3), **p.arguments("grid", "cutoff"), **tol)]


def _circle_line(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    return [tk.circle.verify_line(_given(p.window, 2), **p.arguments("grid", "cutoff"), **tol)]


def _circle_negative_control(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    return [tk.circle.negative_control(_given(p.fold, 3), **p.arguments("grid", "cutoff"), **tol)]


def _dirac_integral(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    return [tk.dixmier.verify_integral(**p.arguments("tau", "m", "n", "lambda_max"), **tol)]


def _integral_scaling(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    args = p.arguments("lambda_max")
    tau, m, n = _given(p.tau, 1j), _given(p.m, 1), _given(p.n, 1)
    return [tk.dixmier.verify_scaling(tau, m, n, **args, **tol)]


def _dixmier_functionals(tk: Toolkit, p: CheckParams, tol: dict[str, Any]) -> list[AxiomReport]:
    return [tk.dixmier.verify_functionals(**p.arguments("pairs", "lambda_max", "seed"), **tol)]


CHECKS: dict[str, CheckFn] = {
    "dirac-spectrum": _dirac_spectrum,
    "triple-axioms": _triple_axioms,
    "local-covering": _local_covering,
    "seminorms": _seminorms,
    "torus-completeness": _torus_completeness,
    "embedding": _embedding,
    "module-decomposition": _module_decomposition,
    "coherent-tower": _coherent_tower,
    "circle-fold": _circle_fold,
    "circle-line": _circle_line,
    "circle-negative-control": _circle_negative_control,
    "dirac-integral": _dirac_integral,
    "integral-scaling": _integral_scaling,
    "dixmier-functionals": _dixmier_functionals,
}


def get_check(name: str) -> CheckFn:
    """Registered check by name.

    Raises:
        NcgException: UNKNOWN_CHECK for an unregistered name.
    """
    try:
        return CHECKS[name]
    except KeyError:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.UNKNOWN_CHECK,
                error_message=f"Unknown check '{name}'.",
                context={"known": sorted(CHECKS)},
            )
        ) from None


class CheckSpec(BaseModel):
    """One entry of a campaign.

    Attributes:
        name: Registered check name.
        params: Flat parameters of the check.
        tolerance: Optional override of the check's default tolerance.
    """

    name: str = Field(..., description="Registered check name.")
    params: CheckParams = Field(default_factory=CheckParams)
    tolerance: Optional[float] = Field(default=None, description="Tolerance override.")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {"name": "circle-fold", "params": {"fold": 3}, "tolerance": 1e-12}
        }
    )

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate the check name and the tolerance."""
        if not isinstance(values, dict):
            return values
        cls._validate_name(values)
        cls._validate_tolerance(values)
        return values

    @classmethod
    def _validate_name(cls, values):
        name = values.get("name")
        if name not in CHECKS:
            raise ValueError(f"Unknown check '{name}'; expected one of {sorted(CHECKS)}")
        return values

    @classmethod
    def _validate_tolerance(cls, values):
        tolerance = values.get("tolerance")
        if tolerance is None:
            return values
        if isinstance(tolerance, (str, bytes, bool)) or not tolerance > 0:
            raise ValueError(f"tolerance must be positive, got '{tolerance}'")
        return values


class CampaignConfig(BaseModel):
    """Ordered list of checks."""

    checks: list[CheckSpec] = Field(default_factory=list)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "checks": [
                    {"name": "dirac-spectrum", "params": {"tau_im": 1.0, "window": 16}},
                    {"name": "circle-fold", "params": {"fold": 3}},
                ]
            }
        }
    )

    @classmethod
    def from_path(cls, path: Union[str, Path]) -> "CampaignConfig":
        """Parse a JSON campaign file."""
        return cls.model_validate(json.loads(Path(path).read_text(encoding="utf-8")))


class CheckResult(BaseModel):
    """Reports of one configured check with its wall-clock time."""

    name: str
    reports: list[AxiomReport]
    wall_clock: float = Field(..., description="Seconds spent in the check.")

    @property
    def passed(self) -> bool:
        """True when every report of the check passes."""
        return all(r.passed for r in self.reports)

    def to_json_dict(self, timing: bool = True) -> dict[str, Any]:
        """Serialize; ``timing=False`` drops the wall-clock field."""
        out: dict[str, Any] = {
            "name": self.name,
            "pass": self.passed,
            "reports": [r.to_json_dict() for r in self.reports],
        }
        if timing:
            out["wall_clock"] = self.wall_clock
        return out


class CampaignReport(BaseModel):
    """Outcome of a campaign; it passes exactly when every check passes."""

    checks: list[CheckResult] = Field(default_factory=list)
    config: CampaignConfig = Field(default_factory=CampaignConfig)

    @property
    def passed(self) -> bool:
        """Overall outcome."""
        return all(c.passed for c in self.checks)

    @property
    def summary(self) -> dict[str, int]:
        """Counts of checks and reports."""
        reports = [r for c in self.checks for r in c.reports]
        return {
            "checks": len(self.checks),
            "passed": sum(c.passed for c in self.checks),
            "failed": sum(not c.passed for c in self.checks),
            "reports": len(reports),
            "failed_reports": sum(not r.passed for r in reports),
        }

    def to_json_dict(self, timing: bool = True) -> dict[str, Any]:
        """Serialize in the versioned report format."""
        return {
            "schema": REPORT_SCHEMA,
            "pass": self.passed,
            "summary": self.summary,
            "checks": [c.to_json_dict(timing) for c in self.checks],
            "config": self.config.model_dump(mode="json", exclude_none=True),
        }

    def to_json(self, timing: bool = True) -> str:
        """JSON text with sorted keys."""
        return json.dumps(self.to_json_dict(timing), indent=2, sort_keys=True)


def run_check(toolkit: Toolkit, spec: CheckSpec) -> CheckResult:
    """Run one configured check and time it."""
    check = get_check(spec.name)
    tolerance = {} if spec.tolerance is None else {"tolerance": spec.tolerance}
    start = time.perf_counter()
    reports = check(toolkit, spec.params, tolerance)
    elapsed = time.perf_counter() - start
    logger.info("Check %s finished in %.3f s", spec.name, elapsed)
    return CheckResult(name=spec.name, reports=reports, wall_clock=elapsed)


def run_campaign(config: CampaignConfig, toolkit: Optional[Toolkit] = None) -> CampaignReport:
    """Run every check on a pool of ``settings.workers`` threads, in configured order."""
    toolkit = toolkit or Toolkit()
    with ThreadPoolExecutor(max_workers=toolkit.settings.workers) as pool:
        results = list(pool.map(lambda spec: run_check(toolkit, spec), config.checks))
    report = CampaignReport(checks=results, config=config)
    logger.info("Campaign finished: %s", report.summary)
    return report


def preset(name: str) -> CampaignConfig:
    """Bundled campaigns.

    Raises:
        NcgException: CONFIG_INVALID for an unknown preset.
    """
    if name != PRESET_NAME:
        raise NcgException(
            NcgError(
                error_code=ErrorCode.CONFIG_INVALID,
                error_message=f"Unknown preset '{name}'.",
                context={"known": [PRESET_NAME]},
            )
        )
    root2 = math.sqrt(2.0)
    tower = {
        "theta0": 1.0,
        "levels": [
            {"m": 2, "n": 1, "k": 0},
            {"m": 1, "n": 2, "k": 1},
            {"m": 2, "n": 1, "k": 0},
            {"m": 1, "n": 2, "k": 0},
        ],
    }
    checks: list[dict[str, Any]] = [
        {"name": "dirac-spectrum", "params": {"tau_im": 1.0, "window": 16}},
        {"name": "dirac-spectrum", "params": {"tau_re": 0.5, "tau_im": 1.0, "m": 2, "n": 3, "window": 16}},
        *(
            {"name": "triple-axioms", "params": {"theta": theta, "window": 32, "guard": 8, "pairs": 100, "support": 4}}
            for theta in (0.0, 1.0, root2)
        ),
        *(
            {"name": "torus-completeness", "params": {"m": m, "n": n, "k": k, "theta": 1.0, "cutoff": 256}}
            for m, n, k in ((2, 3, 0), (2, 3, 1), (3, 5, 0))
        ),
        *({"name": "circle-fold", "params": {"fold": fold}} for fold in (2, 3, 5)),
        {"name": "circle-negative-control", "params": {"fold": 3}},
        {"name": "module-decomposition", "params": {"m": 2, "n": 3, "k": 1, "theta": 1.0, "count": 500}},
        {"name": "embedding", "params": {"m": 2, "n": 3, "k": 1, "theta": root2, "pairs": 1000}},
        {"name": "dirac-integral", "params": {"tau_im": 1.0, "lambda_max": 1e6}},
        *(
            {"name": "integral-scaling", "params": {"tau_re": 0.5, "tau_im": 1.0, "m": m, "n": n, "lambda_max": 1e6}}
            for m, n in ((2, 1), (2, 3))
        ),
        {"name": "coherent-tower", "params": {"tower": tower, "seed": 5, "corrupt_level": 2}},
        {"name": "dixmier-functionals", "params": {"pairs": 1000, "lambda_max": 1e5}},
        *({"name": "local-covering", "params": {"m": m, "n": n, "grid": 256}} for m, n in ((2, 1), (2, 2))),
        {"name": "seminorms", "params": {"theta": 1.0, "max_order": 3, "window": 6}},
    ]
    return CampaignConfig.model_validate({"checks": checks})
