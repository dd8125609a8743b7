"""
Module: app.py
Description: Command-line entry point of the BTSA stiffness toolkit.

Subcommands: stiffness, sweep, break, kinematics, analyze, verify. Exit codes: 0 success,
1 verification failure, 2 invalid input or configuration, 3 math domain error, 4 file I/O error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from src.config import FIT_WINDOW_MM, LOG_FILE, LOG_LEVEL
from src.data.measurement_processor import summarize_conditions
from src.data.measurements import parse_measurements, records_to_frame
from src.data.reference_data import fingertip_rows
from src.errors import BTSAError, ValidationError, VerificationError
from src.models.design_explorer import DEFAULT_ASPECT_RATIOS, SweepSpec, emit_csv, emit_svg, run_sweep, sweep_to_csv
from src.models.experiment_analysis import ESTIMATORS, OLS, build_summary_report, fit_all
from src.models.mechanics import (
    ArcGeometry,
    backbone_and_tip,
    break_check,
    degrees_to_radians,
    lateral_stiffness,
)
from src.models.oracles import discrete_chain_stiffness
from src.models.verification import GRIDS, run_verification
from src.utils.output import write_text
from src.utils.run_config import RunConfig, load_run_config
from src.views.report_view import (
    render_summary_report,
    render_sweep_summary,
    render_verification,
    report_to_csv,
    verification_to_csv,
)
from src.views.stiffness_view import (
    backbone_to_csv,
    render_break_verdict,
    render_stiffness,
    render_tip,
    stiffness_to_csv,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

# flag, config path, type
OVERRIDE_FLAGS = [
    ("--E-mpa", "material.E_MPa", float),
    ("--nu", "material.nu", float),
    ("--height-mm", "section.h_mm", float),
    ("--width-mm", "section.b_mm", float),
    ("--C-mm", "geometry.C_mm", float),
    ("--length-mm", "chain.L_mm", float),
    ("--tension-N", "chain.F_T_N", float),
    ("--segments", "chain.N_segments", int),
]


def configure_logging(verbose: bool = False) -> None:
    """Logs go to stderr (and LOG_FILE when set); stdout only carries command output."""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if LOG_FILE:
        handlers.append(logging.FileHandler(LOG_FILE))
    logging.basicConfig(
        level=logging.INFO if verbose else LOG_LEVEL.upper(),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration (flags override its values)")
    common.add_argument("--verbose", action="store_true", help="log progress to stderr")
    for flag, path, kind in OVERRIDE_FLAGS:
        common.add_argument(flag, type=kind, dest=path.replace(".", "__"), help=f"overrides {path}")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="btsa",
        description="Lateral stiffness model, design sweeps and experiment analysis for the BTSA.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    stiffness = commands.add_parser("stiffness", parents=[common], help="closed-form lateral stiffness")
    stiffness.add_argument("--alpha-deg", type=float, required=True, help="bending angle in degrees")
    stiffness.add_argument("--out-csv", help="also write the result as a one-row CSV")

    sweep = commands.add_parser("sweep", parents=[common], help="evaluation function over angle and aspect ratio")
    sweep.add_argument("--lambda", dest="lambdas", type=float, nargs="+", default=list(DEFAULT_ASPECT_RATIOS))
    sweep.add_argument("--alpha-max-deg", type=float, default=180.0)
    sweep.add_argument("--samples", type=int, default=64)
    sweep.add_argument("--stiffness", action="store_true", help="add k using the configured material and width")
    sweep.add_argument("--out-csv")
    sweep.add_argument("--out-svg")

    breaking = commands.add_parser("break", parents=[common], help="granular separation check")
    breaking.add_argument("--force-N", type=float, required=True, help="applied lateral force")

    kinematics = commands.add_parser("kinematics", parents=[common], help="constant-curvature backbone")
    kinematics.add_argument("--alpha-deg", type=float, required=True)
    kinematics.add_argument("--samples", type=int, default=50)
    kinematics.add_argument("--out-csv", help="write the backbone here instead of stdout")

    analyze = commands.add_parser("analyze", parents=[common], help="fit stiffness from measurement CSV")
    analyze.add_argument("csv_path")
    analyze.add_argument("--window-mm", type=float, default=FIT_WINDOW_MM, help="upper end of the fit window")
    analyze.add_argument("--estimator", choices=ESTIMATORS, default=OLS)
    analyze.add_argument("--fingertip", action="store_true", help="include the fingertip force comparison")
    analyze.add_argument("--report-out", help="text report path; a CSV mirror is written next to it")

    verify = commands.add_parser("verify", parents=[common], help="run the oracle conformance grid")
    verify.add_argument("--grid", choices=sorted(GRIDS), default="coarse")
    verify.add_argument("--report-csv")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, object]:
    return {path: getattr(args, path.replace(".", "__")) for _, path, _ in OVERRIDE_FLAGS}


def _angle(alpha_deg: float) -> float:
    if not (0.0 <= alpha_deg <= 360.0):
        raise ValidationError(f"--alpha-deg must lie in [0, 360], got {alpha_deg:g}")
    return degrees_to_radians(alpha_deg)


def _samples(samples: int) -> int:
    if samples < 2:
        raise ValidationError(f"--samples must be at least 2, got {samples}")
    return samples


def _window(window_mm: float) -> float:
    if not (0.0 < window_mm < float("inf")):
        raise ValidationError(f"--window-mm must be positive, got {window_mm:g}")
    return window_mm


def cmd_stiffness(args: argparse.Namespace, config: RunConfig) -> int:
    arc = ArcGeometry(C=config.C, alpha=_angle(args.alpha_deg))
    result = lateral_stiffness(config.material, config.section, arc, config.chain)
    chain_k = None
    if config.chain.N >= 2:
        chain_k = discrete_chain_stiffness(config.chain.N, config.material, config.section, arc)
    sys.stdout.write(render_stiffness(result, chain_k, config.chain.N))
    target = args.out_csv or config.outputs.csv
    if target:
        write_text(stiffness_to_csv(result), target)
    return 0


def cmd_sweep(args: argparse.Namespace, config: RunConfig) -> int:
    spec = SweepSpec(
        lambda_values=tuple(args.lambdas),
        alpha_range=(0.0, _angle(args.alpha_max_deg)),
        n_alpha=_samples(args.samples),
        nu=config.material.nu,
    )
    if args.stiffness:
        table = run_sweep(spec, config.material, config.section, config.C)
    else:
        table = run_sweep(spec)

    csv_path = args.out_csv or config.outputs.csv
    svg_path = args.out_svg or config.outputs.svg
    if csv_path:
        emit_csv(table, csv_path)
    if svg_path:
        emit_svg(table, svg_path)
    if csv_path or svg_path:
        sys.stdout.write(render_sweep_summary(table))
    else:
        sys.stdout.write(sweep_to_csv(table))
    return 0


def cmd_break(args: argparse.Namespace, config: RunConfig) -> int:
    if not (args.force_N >= 0):
        raise ValidationError(f"--force-N must be non-negative, got {args.force_N:g}")
    separated = break_check(args.force_N, config.chain)
    sys.stdout.write(render_break_verdict(separated, config.chain))
    return 0


def cmd_kinematics(args: argparse.Namespace, config: RunConfig) -> int:
    arc = ArcGeometry(C=config.C, alpha=_angle(args.alpha_deg))
    backbone = backbone_and_tip(arc, _samples(args.samples))
    text = backbone_to_csv(backbone)
    target = args.out_csv or config.outputs.csv
    if target:
        write_text(text, target)
        sys.stdout.write(render_tip(backbone))
    else:
        sys.stdout.write(text)
    return 0


def _mirror_path(report_path: Path) -> Path:
    if report_path.suffix.lower() == ".csv":
        return report_path.with_name(report_path.stem + "_table.csv")
    return report_path.with_suffix(".csv")


def cmd_analyze(args: argparse.Namespace, config: RunConfig) -> int:
    records = parse_measurements(args.csv_path)
    if not records:
        raise ValidationError(f"{args.csv_path}: no measurement rows")
    estimates = fit_all(records, window=(0.0, _window(args.window_mm)), estimator=args.estimator)
    report = build_summary_report(
        estimates,
        fingertip_rows=fingertip_rows() if args.fingertip else None,
        model=config.model_setup() if args.config else None,
    )
    text = render_summary_report(report, summarize_conditions(records_to_frame(records)))
    sys.stdout.write(text)

    target = args.report_out or config.outputs.report
    if target:
        write_text(text, target)
        write_text(report_to_csv(report), _mirror_path(Path(target)))
    return 0


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    report = run_verification(args.grid, tolerances=config.tolerances)
    sys.stdout.write(render_verification(report))
    target = args.report_csv or config.outputs.csv
    if target:
        write_text(verification_to_csv(report), target)
    failed = report[~report["passed"]]
    if not failed.empty:
        raise VerificationError(
            f"{len(failed)} oracle checks exceeded their tolerance: {sorted(set(failed['check']))}"
        )
    return 0


COMMANDS = {
    "stiffness": cmd_stiffness,
    "sweep": cmd_sweep,
    "break": cmd_break,
    "kinematics": cmd_kinematics,
    "analyze": cmd_analyze,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return int(exit_request.code or 0)

    configure_logging(args.verbose)
    try:
        config = load_run_config(args.config, _overrides(args))
        return COMMANDS[args.command](args, config)
    except BTSAError as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
