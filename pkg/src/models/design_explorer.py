"""
Module: design_explorer.py
Description: Evaluation-function sweeps over bending angle and aspect ratio, exhaustive section
             search under a height constraint, and CSV/SVG emission of sweep tables.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

from src.config import SEARCH_RESOLUTION
from src.errors import ConfigurationError, DomainError, ValidationError
from src.models.mechanics import FULL_TURN, BeamSection, Material, evaluation_grid
from src.utils.output import write_text
from src.utils.visualization import render_sweep_svg

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["lambda", "alpha_rad", "F_alpha", "k_N_per_mm"]
DEFAULT_ASPECT_RATIOS = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0)

MAX_MIN_OVER_ALPHA = "max_min_stiffness_over_alpha"
MAX_AT_ALPHA = "max_stiffness_at_alpha"
OBJECTIVES = (MAX_MIN_OVER_ALPHA, MAX_AT_ALPHA)


@dataclass(frozen=True)
class SweepSpec:
    lambda_values: Tuple[float, ...] = DEFAULT_ASPECT_RATIOS
    alpha_range: Tuple[float, float] = (0.0, math.pi)
    n_alpha: int = 64
    nu: float = 0.35

    def __post_init__(self) -> None:
        if len(self.lambda_values) == 0:
            raise ConfigurationError("at least one aspect ratio is required", field_path="lambda_values")
        for value in self.lambda_values:
            if not (math.isfinite(value) and value > 0):
                raise ConfigurationError(f"aspect ratios must be positive, got {value}", field_path="lambda_values")
        low, high = self.alpha_range
        if not (0.0 <= low < high <= FULL_TURN):
            raise ConfigurationError(
                f"alpha range must satisfy 0 <= min < max <= 2*pi, got {self.alpha_range}", field_path="alpha_range"
            )
        if isinstance(self.n_alpha, bool) or not isinstance(self.n_alpha, int) or self.n_alpha < 2:
            raise ConfigurationError(f"at least 2 angle samples are required, got {self.n_alpha!r}", field_path="n_alpha")
        if not (math.isfinite(self.nu) and 0.0 <= self.nu < 0.5):
            raise ConfigurationError(f"Poisson's ratio must lie in [0, 0.5), got {self.nu}", field_path="nu")

    def alphas(self) -> np.ndarray:
        return np.linspace(self.alpha_range[0], self.alpha_range[1], self.n_alpha)


@dataclass(frozen=True)
class SectionSearchSpec:
    b_range: Tuple[float, float]
    h_range: Tuple[float, float]
    max_height: Optional[float] = None
    objective: str = MAX_MIN_OVER_ALPHA
    alpha_star: Optional[float] = None
    alpha_grid: Tuple[float, ...] = field(
        default_factory=lambda: tuple(np.linspace(math.pi / 64, math.pi, 64))
    )
    resolution: int = SEARCH_RESOLUTION

    def __post_init__(self) -> None:
        for name in ("b_range", "h_range"):
            low, high = getattr(self, name)
            if not (math.isfinite(low) and math.isfinite(high) and 0 < low <= high):
                raise ConfigurationError(f"range must be positive and ordered, got {(low, high)}", field_path=name)
        if self.max_height is not None and not (self.max_height > 0):
            raise ConfigurationError(f"height limit must be positive, got {self.max_height}", field_path="max_height")
        if self.objective not in OBJECTIVES:
            raise ConfigurationError(f"objective must be one of {OBJECTIVES}", field_path="objective")
        if self.objective == MAX_AT_ALPHA:
            if self.alpha_star is None or not (0.0 <= self.alpha_star <= FULL_TURN):
                raise ConfigurationError("alpha_star in [0, 2*pi] is required", field_path="alpha_star")
        if len(self.alpha_grid) == 0 or any(not (0.0 <= a <= FULL_TURN) for a in self.alpha_grid):
            raise ConfigurationError("alpha grid must be non-empty and within [0, 2*pi]", field_path="alpha_grid")
        if isinstance(self.resolution, bool) or not isinstance(self.resolution, int) or self.resolution < 2:
            raise ConfigurationError(f"resolution must be an integer >= 2, got {self.resolution!r}", field_path="resolution")

    def objective_alphas(self) -> np.ndarray:
        if self.objective == MAX_AT_ALPHA:
            return np.array([self.alpha_star], dtype=float)
        return np.asarray(self.alpha_grid, dtype=float)


@dataclass(frozen=True)
class SectionSearchResult:
    feasible: bool
    h: Optional[float] = None
    b: Optional[float] = None
    objective_value: Optional[float] = None
    table: Optional[pd.DataFrame] = field(default=None, repr=False)
    reason: str = ""


def _stiffness_scale(mat: Material, h: float, b: float, C: float) -> float:
    return 4.0 * mat.E * (h * b ** 3 / 12.0) / C ** 3


def run_sweep(
    spec: SweepSpec,
    mat: Optional[Material] = None,
    section: Optional[BeamSection] = None,
    C: Optional[float] = None,
) -> pd.DataFrame:
    """
    Evaluate F(alpha) on the full (lambda, alpha) grid.

    When a material, a section template and an arc length are all supplied, the stiffness column is
    filled as well. The template fixes the width b; each aspect ratio sets h = lambda * b.

    Parameters:
        spec (SweepSpec): Grid definition.
        mat (Material, optional): Chain material.
        section (BeamSection, optional): Section template (its width is used).
        C (float, optional): Arc length in mm.

    Returns:
        pd.DataFrame: Rows sorted by (lambda, alpha) with columns SWEEP_COLUMNS.
    """
    physical = (mat, section, C)
    if any(item is not None for item in physical) and not all(item is not None for item in physical):
        raise ConfigurationError("stiffness needs material, section and arc length together", field_path="sweep")
    if C is not None and not (math.isfinite(C) and C > 0):
        raise ConfigurationError(f"arc length must be positive, got {C}", field_path="geometry.C_mm")

    alphas = spec.alphas()
    frames = []
    for aspect_ratio in sorted(set(spec.lambda_values)):
        try:
            _, _, f_alpha = evaluation_grid(alphas, spec.nu, aspect_ratio)
        except DomainError as exc:
            raise DomainError(f"{exc} (grid point lambda={aspect_ratio:g})", field=exc.field) from exc
        stiffness = np.full(len(alphas), np.nan)
        if mat is not None:
            stiffness = _stiffness_scale(mat, aspect_ratio * section.b, section.b, C) * f_alpha
        frames.append(pd.DataFrame({
            "lambda": np.full(len(alphas), float(aspect_ratio)),
            "alpha_rad": alphas,
            "F_alpha": f_alpha,
            "k_N_per_mm": stiffness,
        }))

    table = pd.concat(frames, ignore_index=True)
    table = table.sort_values(["lambda", "alpha_rad"], kind="mergesort").reset_index(drop=True)
    logger.info(f"Sweep evaluated {len(table)} grid points for {len(spec.lambda_values)} aspect ratios")
    return table[SWEEP_COLUMNS]


def _candidate_values(bounds: Tuple[float, float], resolution: int) -> np.ndarray:
    return np.unique(np.linspace(bounds[0], bounds[1], resolution))


def find_best_section(spec: SectionSearchSpec, mat: Material, C: float) -> SectionSearchResult:
    """
    Exhaustive grid search over (h, b) maximising the chosen stiffness objective.

    Ties are broken by larger I, then smaller h, then smaller b. An empty feasible set is reported
    through SectionSearchResult.feasible instead of an exception.
    """
    if not (math.isfinite(C) and C > 0):
        raise ConfigurationError(f"arc length must be positive, got {C}", field_path="geometry.C_mm")

    b_values = _candidate_values(spec.b_range, spec.resolution)
    h_values = _candidate_values(spec.h_range, spec.resolution)
    if spec.max_height is not None:
        h_values = h_values[h_values <= spec.max_height * (1.0 + 1e-12)]
    if len(h_values) == 0:
        logger.info("Section search infeasible: height limit below the height range")
        return SectionSearchResult(
            feasible=False, reason=f"max_height {spec.max_height} is below the height range {spec.h_range}"
        )

    alphas = spec.objective_alphas()
    candidates = []
    for h in h_values:
        for b in b_values:
            _, _, f_alpha = evaluation_grid(alphas, mat.nu, h / b)
            stiffness = _stiffness_scale(mat, h, b, C) * f_alpha
            candidates.append((float(np.min(stiffness)), h * b ** 3 / 12.0, float(h), float(b)))

    objective_value, _, best_h, best_b = min(candidates, key=lambda c: (-c[0], -c[1], c[2], c[3]))
    logger.info(f"Section search over {len(candidates)} candidates selected h={best_h:.6g} mm, b={best_b:.6g} mm")

    report_alphas = np.asarray(spec.alpha_grid, dtype=float)
    _, _, f_alpha = evaluation_grid(report_alphas, mat.nu, best_h / best_b)
    table = pd.DataFrame({
        "lambda": np.full(len(report_alphas), best_h / best_b),
        "alpha_rad": report_alphas,
        "F_alpha": f_alpha,
        "k_N_per_mm": _stiffness_scale(mat, best_h, best_b, C) * f_alpha,
    }).sort_values("alpha_rad", kind="mergesort").reset_index(drop=True)
    return SectionSearchResult(feasible=True, h=best_h, b=best_b, objective_value=objective_value, table=table)


def sweep_to_csv(table: pd.DataFrame) -> str:
    """Serialise a sweep table: fixed header, %.9g numbers, empty k when not computed, LF endings."""
    if table.empty:
        raise ValidationError("cannot serialise an empty sweep table")
    return table[SWEEP_COLUMNS].to_csv(index=False, float_format="%.9g", lineterminator="\n", na_rep="")


def emit_csv(table: pd.DataFrame, path: Union[str, Path]) -> None:
    write_text(sweep_to_csv(table), path)


def emit_svg(table: pd.DataFrame, path: Union[str, Path]) -> None:
    """Write the sweep as a static line chart, one polyline per aspect ratio."""
    if table.empty:
        raise ValidationError("cannot plot an empty sweep table")
    write_text(render_sweep_svg(table), path)
