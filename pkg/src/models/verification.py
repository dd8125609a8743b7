"""
Module: verification.py
Description: Runs the oracle acceptance grid against the closed-form model and tabulates every
             comparison with its tolerance. Used by the `verify` command.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from src.errors import DomainError
from src.models.mechanics import (
    ArcGeometry,
    BeamSection,
    Evaluator,
    Material,
    closed_form_stiffness,
    evaluation_function,
    internal_moments,
)
from src.models.oracles import (
    OracleReport,
    QuadratureSpec,
    discrete_chain_stiffness,
    displacement_castigliano_fd,
    displacement_from_energy,
    moment_decomposition_oracle,
    stiffness_via_quadrature,
    straight_cantilever_compliance,
)

logger = logging.getLogger(__name__)

REPORT_COLUMNS = [
    "check", "alpha_rad", "lambda", "nu", "value", "reference", "rel_error", "tolerance", "passed"
]


@dataclass(frozen=True)
class VerificationTolerances:
    straight_limit: float = 1e-8
    closed_form: float = 1e-6
    castigliano: float = 1e-6
    discrete_chain: float = 1e-2
    moment: float = 1e-10


@dataclass(frozen=True)
class VerificationGrid:
    alphas: tuple
    lambdas: tuple
    nus: tuple
    castigliano_draws: int
    chain_cases: tuple
    moment_draws: int


GRIDS: Dict[str, VerificationGrid] = {
    "coarse": VerificationGrid(
        alphas=(0.5, 1.0, 1.5, 2.0, 2.5, 3.0, math.pi),
        lambdas=(0.25, 1.0, 2.0),
        nus=(0.35,),
        castigliano_draws=5,
        chain_cases=((math.pi / 2, 1.0, 0.35), (math.pi, 2.0, 0.35)),
        moment_draws=20,
    ),
    "full": VerificationGrid(
        alphas=tuple(round(0.1 * i, 1) for i in range(1, 32)) + (math.pi,),
        lambdas=(0.25, 0.5, 1.0, 2.0),
        nus=(0.0, 0.35, 0.49),
        castigliano_draws=20,
        chain_cases=(
            (math.pi / 2, 1.0, 0.35),
            (math.pi, 2.0, 0.35),
            (0.5, 0.25, 0.35),
            (2.0, 0.5, 0.0),
            (math.pi / 4, 1.0, 0.49),
        ),
        moment_draws=100,
    ),
}

# Reference beam used for every grid point: E = 2000 MPa, width 10 mm, C = 100 mm.
_E_MPA = 2000.0
_WIDTH_MM = 10.0
_ARC_LENGTH_MM = 100.0
_CHAIN_SEGMENTS = 200
_SEED = 20240607


def _beam(aspect_ratio: float, nu: float):
    return Material(E=_E_MPA, nu=nu), BeamSection(h=aspect_ratio * _WIDTH_MM, b=_WIDTH_MM)


def _row(check: str, alpha: float, aspect_ratio: float, nu: float, report: OracleReport, tolerance: float) -> dict:
    return {
        "check": check,
        "alpha_rad": alpha,
        "lambda": aspect_ratio,
        "nu": nu,
        "value": report.value,
        "reference": report.reference,
        "rel_error": report.rel_error,
        "tolerance": tolerance,
        "passed": bool(report.within(tolerance)),
    }


def run_verification(
    grid: str = "coarse",
    evaluate: Evaluator = evaluation_function,
    tolerances: Optional[VerificationTolerances] = None,
    spec: Optional[QuadratureSpec] = None,
) -> pd.DataFrame:
    """
    Evaluate all oracle checks on the named grid.

    Parameters:
        grid (str): "coarse" or "full".
        evaluate (Evaluator): Evaluation function under test.
        tolerances (VerificationTolerances, optional): Relative error limits per check.
        spec (QuadratureSpec, optional): Quadrature resolution.

    Returns:
        pd.DataFrame: One row per comparison in a fixed order, columns REPORT_COLUMNS.
    """
    if grid not in GRIDS:
        raise DomainError(f"unknown verification grid {grid!r}; choose from {sorted(GRIDS)}", field="grid")
    settings = GRIDS[grid]
    tolerances = tolerances or VerificationTolerances()
    spec = spec or QuadratureSpec()
    rng = np.random.default_rng(_SEED)
    rows: List[dict] = []

    # Straight limit: the closed form must recover the classic 3EI/C^3 cantilever.
    mat, sec = _beam(1.0, 0.35)
    straight = ArcGeometry(C=_ARC_LENGTH_MM, alpha=1e-7)
    reference = 1.0 / straight_cantilever_compliance(mat, sec, _ARC_LENGTH_MM)
    report = OracleReport.compare(closed_form_stiffness(mat, sec, straight, evaluate), reference)
    rows.append(_row("straight_limit", straight.alpha, 1.0, 0.35, report, tolerances.straight_limit))

    logger.info(
        f"Verifying closed form on {len(settings.alphas)}x{len(settings.lambdas)}x{len(settings.nus)} grid"
    )
    for nu in settings.nus:
        for aspect_ratio in settings.lambdas:
            mat, sec = _beam(aspect_ratio, nu)
            for alpha in settings.alphas:
                arc = ArcGeometry(C=_ARC_LENGTH_MM, alpha=alpha)
                report = stiffness_via_quadrature(mat, sec, arc, spec, evaluate=evaluate)
                rows.append(_row("closed_form_vs_quadrature", alpha, aspect_ratio, nu, report, tolerances.closed_form))

    for _ in range(settings.castigliano_draws):
        alpha = float(rng.uniform(0.1, math.pi))
        aspect_ratio = float(rng.uniform(0.25, 2.0))
        nu = float(rng.uniform(0.0, 0.49))
        load = float(rng.uniform(0.5, 5.0))
        mat, sec = _beam(aspect_ratio, nu)
        arc = ArcGeometry(C=_ARC_LENGTH_MM, alpha=alpha)
        delta_fd = displacement_castigliano_fd(load, mat, sec, arc, spec)
        delta_energy = displacement_from_energy(load, mat, sec, arc, spec)
        delta_model = load / closed_form_stiffness(mat, sec, arc, evaluate)
        rows.append(_row("castigliano_fd_vs_energy", alpha, aspect_ratio, nu,
                         OracleReport.compare(delta_fd, delta_energy), tolerances.castigliano))
        rows.append(_row("castigliano_fd_vs_closed_form", alpha, aspect_ratio, nu,
                         OracleReport.compare(delta_model, delta_fd), tolerances.castigliano))

    for alpha, aspect_ratio, nu in settings.chain_cases:
        mat, sec = _beam(aspect_ratio, nu)
        arc = ArcGeometry(C=_ARC_LENGTH_MM, alpha=alpha)
        report = OracleReport.compare(
            closed_form_stiffness(mat, sec, arc, evaluate),
            discrete_chain_stiffness(_CHAIN_SEGMENTS, mat, sec, arc),
        )
        rows.append(_row("discrete_chain_n200", alpha, aspect_ratio, nu, report, tolerances.discrete_chain))

    # Moments are compared against the F*R scale; individual components pass through zero.
    worst: Optional[OracleReport] = None
    worst_alpha = float("nan")
    for _ in range(settings.moment_draws):
        load = float(rng.uniform(0.1, 10.0))
        radius = float(rng.uniform(10.0, 200.0))
        alpha = float(rng.uniform(0.1, 2.0 * math.pi))
        phi = float(rng.uniform(0.0, alpha))
        arc = ArcGeometry(C=radius * alpha, alpha=alpha)
        closed = internal_moments(load, arc, phi)
        vector = moment_decomposition_oracle(load, arc, phi)
        scale = load * arc.R
        error = max(abs(closed[0] - vector[0]), abs(closed[1] - vector[1])) / scale
        if worst is None or error > worst.rel_error:
            worst = OracleReport(value=closed[1], reference=vector[1], abs_error=error * scale, rel_error=error)
            worst_alpha = alpha
    if worst is not None:
        rows.append(_row("moment_decomposition_max", worst_alpha, float("nan"), float("nan"), worst, tolerances.moment))

    report_frame = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    failed = int((~report_frame["passed"]).sum())
    logger.info(f"Verification finished: {len(report_frame)} checks, {failed} failed")
    return report_frame
