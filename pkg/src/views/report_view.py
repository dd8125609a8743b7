"""
Module: report_view.py
Description: Plain-text rendering of sweep summaries, experiment reports and verification tables,
             plus the CSV mirror of the experiment report.
"""

from typing import List, Optional

import pandas as pd

from src.models.experiment_analysis import SummaryReport


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return "-" if pd.isna(value) else f"{value:.6g}"
    return str(value)


def render_table(table: pd.DataFrame) -> str:
    """Fixed-width text table: %.6g numbers, '-' for missing values, 'yes'/'no' for flags."""
    cells = [[str(column) for column in table.columns]]
    for row in table.itertuples(index=False):
        cells.append([_format_value(value.item() if hasattr(value, "item") else value) for value in row])
    widths = [max(len(line[i]) for line in cells) for i in range(len(table.columns))]
    lines = ["  ".join(cell.rjust(width) for cell, width in zip(line, widths)) for line in cells]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"


def _section(title: str, table: Optional[pd.DataFrame]) -> List[str]:
    if table is None:
        return []
    body = render_table(table) if not table.empty else "(none)\n"
    return [f"== {title} ==\n", body, "\n"]


def render_summary_report(report: SummaryReport, conditions: Optional[pd.DataFrame] = None) -> str:
    parts: List[str] = _section("measured conditions", conditions)
    for angle, rows in report.per_angle().items():
        parts += _section(f"stiffness at {angle:g} deg", rows.drop(columns=["bending_angle_deg"]))
    parts += _section("lateral enhancement (with / without BLS)", report.enhancement)
    parts += _section("stiffness modulation", report.modulation)
    parts += _section("fingertip force comparison", report.fingertip)
    if report.model_comparison is not None:
        parts += _section("closed-form model vs measured (no correction applied)", report.model_comparison)
    return "".join(parts).rstrip("\n") + "\n"


def report_to_csv(report: SummaryReport) -> str:
    """CSV mirror of the stiffness table, enhancement ratios included."""
    return report.stiffness.to_csv(index=False, float_format="%.9g", lineterminator="\n", na_rep="")


def render_sweep_summary(table: pd.DataFrame) -> str:
    """One line per aspect ratio with the F(alpha) extremes over the sampled angles."""
    lines = []
    for aspect_ratio, rows in table.groupby("lambda", sort=True):
        line = (
            f"lambda {aspect_ratio:g}: {len(rows)} angles, "
            f"F(alpha) {rows['F_alpha'].min():.6g} .. {rows['F_alpha'].max():.6g}"
        )
        if rows["k_N_per_mm"].notna().all():
            line += f", k {rows['k_N_per_mm'].min():.6g} .. {rows['k_N_per_mm'].max():.6g} N/mm"
        lines.append(line)
    return "\n".join(lines) + "\n"


def render_verification(report: pd.DataFrame) -> str:
    failed = int((~report["passed"]).sum())
    worst = report.groupby("check", sort=False)["rel_error"].max()
    lines = [render_table(report), "== worst relative error per check ==\n"]
    lines += [f"{check}: {value:.3e}\n" for check, value in worst.items()]
    lines.append(f"{len(report) - failed}/{len(report)} checks passed\n")
    return "".join(lines)


def verification_to_csv(report: pd.DataFrame) -> str:
    return report.to_csv(index=False, float_format="%.9g", lineterminator="\n", na_rep="")
