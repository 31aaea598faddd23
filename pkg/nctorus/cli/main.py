"""Command line driver: ``nctorus <subcommand> [flags]``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on a usage or
configuration error.
"""

import argparse
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from pydantic import ValidationError

from nctorus.config import RuntimeSettings
from nctorus.dixmier_trace import write_stream_csv
from nctorus.errors import NcgException
from nctorus.toolkit import Toolkit
from nctorus.utils import write_csv

from .campaign import (
    PRESET_NAME,
    REPORT_SCHEMA,
    CampaignConfig,
    CampaignReport,
    CheckSpec,
    preset,
    run_campaign,
)

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

PARAM_FLAGS = (
    "theta",
    "tau_re",
    "tau_im",
    "m",
    "n",
    "k",
    "window",
    "guard",
    "grid",
    "cutoff",
    "lambda_max",
    "fold",
    "depth",
    "seed",
    "pairs",
    "corrupt_level",
)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theta", type=float, default=None, help="Deformation angle.")
    common.add_argument("--tau-re", type=float, default=None, help="Re(tau).")
    common.add_argument("--tau-im", type=float, default=None, help="Im(tau), nonzero.")
    common.add_argument("--m", type=int, default=None, help="Covering order in the u-direction.")
    common.add_argument("--n", type=int, default=None, help="Covering order in the v-direction.")
    common.add_argument("--k", type=int, default=None, help="Winding of the covering angle.")
    common.add_argument("--window", type=int, default=None, help="Truncation radius, or line window.")
    common.add_argument("--guard", type=int, default=None, help="Guard width.")
    common.add_argument("--grid", type=int, default=None, help="Samples per circle.")
    common.add_argument("--cutoff", type=int, default=None, help="Fourier cutoff.")
    common.add_argument("--lambda-max", type=float, default=None, help="Upper end of the Dixmier fit.")
    common.add_argument("--fold", type=int, default=None, help="Number of sheets of the circle cover.")
    common.add_argument("--depth", type=int, default=None, help="Depth of the covering tower.")
    common.add_argument("--seed", type=int, default=None, help="Seed of the element generator.")
    common.add_argument("--pairs", type=int, default=None, help="Number of seeded random pairs.")
    common.add_argument("--corrupt-level", type=int, default=None, help="Tower level to corrupt.")
    common.add_argument("--tolerance", type=float, default=None, help="Tolerance override.")
    common.add_argument("--out", type=Path, default=None, help="Output path; stdout when omitted.")
    common.add_argument("--format", choices=["json", "csv"], default="json", help="Output format.")
    common.add_argument("--no-timing", action="store_true", help="Omit wall-clock fields.")
    common.add_argument("--log-level", default=None, help="Logging level; defaults to NCG_LOG_LEVEL.")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per entry point."""
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="nctorus", description="Verify identities of the noncommutative torus and its coverings."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="Eigenvalues of the truncated Dirac operator.")
    sub.add_parser("dixmier", parents=[common], help="Noncommutative integral of |D|^-2.")
    sub.add_parser("verify-circle", parents=[common], help="Covering sum on the circle (--fold or --window).")
    sub.add_parser("verify-torus-cover", parents=[common], help="Covering completeness on the torus.")
    sub.add_parser("verify-triple-axioms", parents=[common], help="Spectral triple axioms on random pairs.")
    sub.add_parser("coherent-tower", parents=[common], help="Descent coherence along a tower.")
    report = sub.add_parser("report", parents=[common], help="Run a campaign.")
    source = report.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", type=Path, help="JSON campaign file.")
    source.add_argument("--preset", choices=[PRESET_NAME], help="Bundled campaign.")
    return parser


def _params(args: argparse.Namespace) -> dict[str, Any]:
    return {name: getattr(args, name) for name in PARAM_FLAGS if getattr(args, name) is not None}


def _single_check(name: str, args: argparse.Namespace) -> CampaignConfig:
    return CampaignConfig(
        checks=[CheckSpec.model_validate({"name": name, "params": _params(args), "tolerance": args.tolerance})]
    )


def _campaign_config(args: argparse.Namespace) -> CampaignConfig:
    if args.command == "report":
        return preset(args.preset) if args.preset else CampaignConfig.from_path(args.config)
    if args.command == "verify-circle":
        return _single_check("circle-line" if args.window is not None else "circle-fold", args)
    if args.command == "verify-torus-cover":
        return _single_check("torus-completeness", args)
    if args.command == "verify-triple-axioms":
        return _single_check("triple-axioms", args)
    return _single_check("coherent-tower", args)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def _render_report(report: CampaignReport, args: argparse.Namespace) -> str:
    if args.format == "json":
        return report.to_json(timing=not args.no_timing)
    buffer = io.StringIO()
    rows = [
        (check.name, r.axiom, r.residual, r.tolerance, r.passed)
        for check in report.checks
        for r in check.reports
    ]
    write_csv(buffer, ("check", "axiom", "residual", "tolerance", "pass"), rows)
    return buffer.getvalue()


def _given(value: Any, default: Any) -> Any:
    return default if value is None else value


def _tau(args: argparse.Namespace) -> complex:
    return complex(args.tau_re or 0.0, 1.0 if args.tau_im is None else args.tau_im)


def _run_spectrum(toolkit: Toolkit, args: argparse.Namespace) -> int:
    spectrum = toolkit.spectrum(
        _tau(args),
        _given(args.theta, 0.0),
        _given(args.m, 1),
        _given(args.n, 1),
        _given(args.window, 16),
    )
    if args.format == "csv":
        buffer = io.StringIO()
        write_csv(buffer, ("eigenvalue", "multiplicity"), ((v, k) for v, k in spectrum))
        _emit(buffer.getvalue(), args.out)
    else:
        payload = {
            "schema": REPORT_SCHEMA,
            "spectrum": [{"eigenvalue": v, "multiplicity": k} for v, k in spectrum],
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    return EXIT_PASS


def _run_dixmier(toolkit: Toolkit, args: argparse.Namespace) -> int:
    tau, m, n = _tau(args), _given(args.m, 1), _given(args.n, 1)
    lambda_max = _given(args.lambda_max, 1e6)
    if args.format == "csv":
        stream = toolkit.dixmier.stream(tau, m, n, 2.0, int(lambda_max))
        buffer = io.StringIO()
        write_stream_csv(stream, buffer)
        _emit(buffer.getvalue(), args.out)
        return EXIT_PASS
    estimate = toolkit.integral(tau, m, n, lambda_max)
    payload = {"schema": REPORT_SCHEMA, "integral": estimate.to_json_dict()}
    _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    return EXIT_PASS


def _usage_error(message: str) -> int:
    sys.stderr.write(f"nctorus: error: {message}\n")
    return EXIT_USAGE


def _describe(exc: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in err['loc']) or 'config'}: {err['msg']}" for err in exc.errors()
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse the flags, run the subcommand and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        settings = RuntimeSettings.from_env()
        if args.log_level:
            settings = RuntimeSettings.model_validate(
                {**settings.model_dump(), "log_level": args.log_level}
            )
        logging.basicConfig(
            level=settings.level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
        )
        logger.info("Running %s with %d worker(s)", args.command, settings.workers)
        toolkit = Toolkit(settings)
        if args.command == "spectrum":
            return _run_spectrum(toolkit, args)
        if args.command == "dixmier":
            return _run_dixmier(toolkit, args)
        report = run_campaign(_campaign_config(args), toolkit)
    except ValidationError as exc:
        return _usage_error(_describe(exc))
    except NcgException as exc:
        return _usage_error(str(exc))
    except (OSError, json.JSONDecodeError) as exc:
        return _usage_error(f"cannot read configuration: {exc}")
    _emit(_render_report(report, args), args.out)
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
