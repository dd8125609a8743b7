"""
Module: stiffness_view.py
Description: Console and CSV rendering for the stiffness, break and kinematics commands.
"""

from typing import Optional

import pandas as pd

from src.models.mechanics import Backbone, BLSChain, StiffnessResult, radians_to_degrees

STIFFNESS_CSV_COLUMNS = [
    "alpha_deg", "alpha_rad", "lambda", "nu", "A_bending", "A_torsion", "F_alpha",
    "k_N_per_mm", "break_force_N", "extrapolated",
]
BACKBONE_CSV_COLUMNS = ["s_mm", "x_mm", "y_mm"]


def _g(value: float) -> str:
    return f"{value:.6g}"


def render_stiffness(result: StiffnessResult, chain_k: Optional[float] = None, n_segments: Optional[int] = None) -> str:
    """Labelled stiffness summary, one quantity per line, with units."""
    breakdown = result.breakdown
    lines = [
        f"bending angle: {_g(radians_to_degrees(breakdown.alpha))} deg ({_g(breakdown.alpha)} rad)",
        f"aspect ratio: {_g(breakdown.aspect_ratio)}",
        f"A_bending: {_g(breakdown.A_bending)}",
        f"A_torsion: {_g(breakdown.A_torsion)}",
        f"F(alpha): {_g(result.F_alpha)}",
        f"k: {_g(result.k)} N/mm",
        f"break force: {_g(result.break_force)} N",
    ]
    if chain_k is not None:
        lines.append(f"discrete chain k ({n_segments} segments): {_g(chain_k)} N/mm")
    if result.extrapolated:
        lines.append("note: bending angle is beyond the tested range (180 deg); the value is extrapolated")
    return "\n".join(lines) + "\n"


def stiffness_to_csv(result: StiffnessResult) -> str:
    breakdown = result.breakdown
    row = pd.DataFrame([{
        "alpha_deg": radians_to_degrees(breakdown.alpha),
        "alpha_rad": breakdown.alpha,
        "lambda": breakdown.aspect_ratio,
        "nu": breakdown.nu,
        "A_bending": breakdown.A_bending,
        "A_torsion": breakdown.A_torsion,
        "F_alpha": result.F_alpha,
        "k_N_per_mm": result.k,
        "break_force_N": result.break_force,
        "extrapolated": int(result.extrapolated),
    }], columns=STIFFNESS_CSV_COLUMNS)
    return row.to_csv(index=False, float_format="%.9g", lineterminator="\n")


def render_break_verdict(separated: bool, chain: BLSChain) -> str:
    """e.g. 'intact, threshold 1.000 N'."""
    state = "separated" if separated else "intact"
    return f"{state}, threshold {chain.break_force:.3f} N\n"


def backbone_to_csv(backbone: Backbone) -> str:
    table = pd.DataFrame({
        "s_mm": backbone.arc_length,
        "x_mm": backbone.points[:, 0],
        "y_mm": backbone.points[:, 1],
    }, columns=BACKBONE_CSV_COLUMNS)
    return table.to_csv(index=False, float_format="%.9g", lineterminator="\n")


def render_tip(backbone: Backbone) -> str:
    x, y = backbone.tip
    return f"tip: x = {_g(x)} mm, y = {_g(y)} mm, heading {_g(radians_to_degrees(backbone.tip_heading))} deg\n"
