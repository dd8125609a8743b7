"""
Module: experiment_analysis.py
Description: Stiffness estimates from force-displacement sweeps, with/without-BLS enhancement
             ratios, modulation ranges over pressure or rope weight, the fingertip force comparison
             and the assembled summary report.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from src.config import FIT_WINDOW_MM
from src.data.measurement_processor import incremental_ratio_table
from src.data.measurements import MeasurementRecord, records_to_frame
from src.errors import ConditionMismatchError, DomainError, ValidationError
from src.models.mechanics import (
    ArcGeometry,
    BeamSection,
    Material,
    closed_form_stiffness,
    degrees_to_radians,
)
from src.models.quantities import Degree, KiloPascal, Kilogram, Millimetre, Newton, NewtonPerMillimetre

logger = logging.getLogger(__name__)

OLS = "ols"
INCREMENTAL = "incremental"
ESTIMATORS = (OLS, INCREMENTAL)

STIFFNESS_COLUMNS = [
    "condition_id", "bending_angle_deg", "pressure_kPa", "weight_kg", "bls_present",
    "k_N_per_mm", "intercept_N", "r_squared", "n_points", "estimator", "degenerate", "enhancement_ratio",
]
ENHANCEMENT_COLUMNS = [
    "bending_angle_deg", "pressure_kPa", "weight_kg", "with_condition", "without_condition",
    "k_with_N_per_mm", "k_without_N_per_mm", "ratio",
]
MODULATION_COLUMNS = [
    "experiment", "bending_angle_deg", "swept_field", "fixed", "n_conditions",
    "k_min_N_per_mm", "k_max_N_per_mm", "ratio",
]
FINGERTIP_COLUMNS = ["label", "force_N", "pressure_kPa", "is_max"]
MODEL_COLUMNS = ["bending_angle_deg", "condition_id", "k_measured_N_per_mm", "k_model_N_per_mm", "model_over_measured"]

_ANGLE_TOLERANCE = 1e-9


def experiment_of(condition_id: str) -> str:
    """Experiment prefix of a condition id: the text before the first ':' ('' when absent)."""
    return condition_id.split(":", 1)[0] if ":" in condition_id else ""


@dataclass(frozen=True)
class StiffnessEstimate:
    condition_id: str
    k: NewtonPerMillimetre
    intercept: Newton
    r_squared: float
    n_points: int
    bending_angle: Degree = 0.0
    pressure: KiloPascal = 0.0
    weight: Kilogram = 0.0
    bls_present: bool = True
    estimator: str = OLS
    degenerate: bool = False

    def __post_init__(self) -> None:
        if self.n_points < 3:
            raise DomainError(f"an estimate needs at least 3 points, got {self.n_points}", field="n_points")
        if not (0.0 <= self.r_squared <= 1.0):
            raise DomainError(f"r_squared must lie in [0, 1], got {self.r_squared}", field="r_squared")

    @property
    def experiment(self) -> str:
        return experiment_of(self.condition_id)

    @property
    def condition(self) -> Dict[str, object]:
        return {
            "experiment": self.experiment,
            "bending_angle": self.bending_angle,
            "pressure": self.pressure,
            "weight": self.weight,
            "bls_present": self.bls_present,
        }


class ModulationRange(NamedTuple):
    k_min: NewtonPerMillimetre
    k_max: NewtonPerMillimetre
    ratio: float


class FingertipRow(NamedTuple):
    label: str
    force: Newton
    pressure: KiloPascal


@dataclass(frozen=True)
class ModelSetup:
    """Closed-form model placed next to the measured with-BLS stiffness in the report."""

    material: Material
    section: BeamSection
    C: Millimetre


@dataclass
class SummaryReport:
    stiffness: pd.DataFrame
    enhancement: pd.DataFrame
    modulation: pd.DataFrame
    fingertip: Optional[pd.DataFrame] = None
    model_comparison: Optional[pd.DataFrame] = None
    estimates: List[StiffnessEstimate] = field(default_factory=list, repr=False)

    def per_angle(self) -> Dict[float, pd.DataFrame]:
        """Stiffness table split by bending angle, ascending."""
        return {
            float(angle): rows.reset_index(drop=True)
            for angle, rows in self.stiffness.groupby("bending_angle_deg", sort=True)
        }


def _check_window(window: Tuple[float, float]) -> Tuple[float, float]:
    low, high = float(window[0]), float(window[1])
    if not (math.isfinite(low) and math.isfinite(high) and 0.0 <= low < high):
        raise DomainError(f"displacement window must satisfy 0 <= min < max, got {window}", field="window")
    return low, high


def fit_stiffness(
    records: Sequence[MeasurementRecord],
    window: Optional[Tuple[float, float]] = None,
    estimator: str = OLS,
) -> StiffnessEstimate:
    """
    Fit the stiffness of a single condition from its force-displacement points.

    The default estimator is the ordinary least-squares slope with a free intercept. The
    "incremental" estimator averages the consecutive ratios dF/dd instead.

    Parameters:
        records (Sequence[MeasurementRecord]): Points of one condition.
        window (Tuple[float, float], optional): Inclusive displacement window in mm; defaults to
            0 to the configured fit window.
        estimator (str): "ols" or "incremental".

    Returns:
        StiffnessEstimate: Slope, intercept, r^2 and point count.
    """
    if estimator not in ESTIMATORS:
        raise ValidationError(f"unknown estimator {estimator!r}; choose from {list(ESTIMATORS)}")
    if not records:
        raise ValidationError("no measurement points to fit")
    condition_ids = {record.condition_id for record in records}
    if len(condition_ids) > 1:
        raise ConditionMismatchError(f"fit_stiffness expects one condition, got {sorted(condition_ids)}")
    condition_id = records[0].condition_id

    low, high = _check_window(window if window is not None else (0.0, FIT_WINDOW_MM))
    selected = [record for record in records if low <= record.displacement <= high]
    x = np.array([record.displacement for record in selected], dtype=float)
    y = np.array([record.force for record in selected], dtype=float)
    distinct = len(np.unique(x))
    if distinct < 3:
        raise ValidationError(
            f"condition {condition_id!r} has {distinct} distinct displacements in [{low:g}, {high:g}] mm; "
            f"at least 3 are required"
        )

    degenerate = bool(np.ptp(y) == 0.0)
    if degenerate:
        slope, intercept, r_squared = 0.0, float(y[0]), 0.0
    elif estimator == OLS:
        fit = stats.linregress(x, y)
        slope, intercept = float(fit.slope), float(fit.intercept)
        r_squared = float(fit.rvalue) ** 2
    else:
        increments = incremental_ratio_table(records_to_frame(selected))
        slope = float(increments["incremental_ratio_N_per_mm"].mean())
        intercept = float(np.mean(y) - slope * np.mean(x))
        residual = y - (slope * x + intercept)
        r_squared = 1.0 - float(np.sum(residual ** 2)) / float(np.sum((y - np.mean(y)) ** 2))
    r_squared = min(max(r_squared, 0.0), 1.0)

    if degenerate:
        logger.warning(f"Condition {condition_id!r}: force is constant over the window; stiffness set to 0")

    first = records[0]
    return StiffnessEstimate(
        condition_id=condition_id,
        k=slope,
        intercept=intercept,
        r_squared=r_squared,
        n_points=len(selected),
        bending_angle=first.bending_angle,
        pressure=first.pressure,
        weight=first.weight,
        bls_present=first.bls_present,
        estimator=estimator,
        degenerate=degenerate,
    )


def fit_all(
    records: Iterable[MeasurementRecord],
    window: Optional[Tuple[float, float]] = None,
    estimator: str = OLS,
) -> List[StiffnessEstimate]:
    """Fit every condition; estimates come back ordered by condition id."""
    groups: Dict[str, List[MeasurementRecord]] = defaultdict(list)
    for record in records:
        groups[record.condition_id].append(record)
    estimates = [fit_stiffness(groups[condition_id], window, estimator) for condition_id in sorted(groups)]
    logger.info(f"Fitted {len(estimates)} conditions with the {estimator} estimator")
    return estimates


def _same_angle(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=0.0, abs_tol=_ANGLE_TOLERANCE)


def enhancement_ratio(with_bls: StiffnessEstimate, without_bls: StiffnessEstimate) -> float:
    """k_with / k_without for two estimates at the same bending angle and pressure."""
    if not with_bls.bls_present or without_bls.bls_present:
        raise ConditionMismatchError(
            f"expected a with-BLS and a without-BLS estimate, got {with_bls.condition_id!r} "
            f"(bls={int(with_bls.bls_present)}) and {without_bls.condition_id!r} (bls={int(without_bls.bls_present)})"
        )
    if not _same_angle(with_bls.bending_angle, without_bls.bending_angle):
        raise ConditionMismatchError(
            f"bending angles differ: {with_bls.bending_angle:g} deg vs {without_bls.bending_angle:g} deg"
        )
    if not _same_angle(with_bls.pressure, without_bls.pressure):
        raise ConditionMismatchError(f"pressures differ: {with_bls.pressure:g} kPa vs {without_bls.pressure:g} kPa")
    if not (without_bls.k > 0):
        raise DomainError(f"stiffness without BLS must be positive, got {without_bls.k}", field="k_without")
    return with_bls.k / without_bls.k


def swept_field(estimates: Sequence[StiffnessEstimate]) -> Optional[str]:
    """The single condition field that varies across the estimates, or None when none does."""
    reference = estimates[0].condition
    varying = sorted({
        name
        for estimate in estimates[1:]
        for name, value in estimate.condition.items()
        if value != reference[name]
    })
    if len(varying) > 1:
        raise ConditionMismatchError(f"estimates differ in more than one condition field: {varying}")
    return varying[0] if varying else None


def modulation_range(estimates: Sequence[StiffnessEstimate]) -> ModulationRange:
    """
    Extremes of stiffness over one swept variable and their ratio k_max / k_min.

    Parameters:
        estimates (Sequence[StiffnessEstimate]): At least two estimates that share every condition
            field except the swept one.

    Returns:
        ModulationRange: (k_min, k_max, ratio).
    """
    if len(estimates) < 2:
        raise ValidationError(f"a modulation range needs at least 2 estimates, got {len(estimates)}")
    swept_field(estimates)
    values = [estimate.k for estimate in estimates]
    k_min, k_max = min(values), max(values)
    if not (k_min > 0):
        raise DomainError(f"minimum stiffness must be positive, got {k_min}", field="k_min")
    return ModulationRange(k_min=k_min, k_max=k_max, ratio=k_max / k_min)


def fingertip_table(rows: Iterable[Tuple[str, float, float]]) -> pd.DataFrame:
    """
    Blocked-force comparison sorted by force, strongest first, with the maximum flagged.

    Parameters:
        rows: (label, force N, pressure kPa) tuples.

    Returns:
        pd.DataFrame: Columns label, force_N, pressure_kPa, is_max.
    """
    entries = [FingertipRow(*row) for row in rows]
    if not entries:
        raise ValidationError("the fingertip comparison needs at least one row")
    for entry in entries:
        if not (math.isfinite(entry.force) and entry.force >= 0):
            raise DomainError(f"{entry.label}: force must be non-negative, got {entry.force}", field="force_N")
        if not (math.isfinite(entry.pressure) and entry.pressure >= 0):
            raise DomainError(f"{entry.label}: pressure must be non-negative, got {entry.pressure}", field="pressure_kPa")

    table = pd.DataFrame(
        [(entry.label, float(entry.force), float(entry.pressure)) for entry in entries],
        columns=["label", "force_N", "pressure_kPa"],
    )
    table = table.sort_values("force_N", ascending=False, kind="mergesort").reset_index(drop=True)
    table["is_max"] = False
    table.loc[0, "is_max"] = True
    return table[FINGERTIP_COLUMNS]


def _enhancement_pairs(estimates: Sequence[StiffnessEstimate]) -> List[dict]:
    rows = []
    without = [estimate for estimate in estimates if not estimate.bls_present]
    for estimate in estimates:
        if not estimate.bls_present:
            continue
        matches = [
            other for other in without
            if other.experiment == estimate.experiment
            and _same_angle(other.bending_angle, estimate.bending_angle)
            and _same_angle(other.pressure, estimate.pressure)
        ]
        if not matches:
            continue
        if len(matches) > 1:
            raise ConditionMismatchError(
                f"{estimate.condition_id!r} matches several without-BLS conditions: "
                f"{[other.condition_id for other in matches]}"
            )
        reference = matches[0]
        if reference.k > 0:
            ratio = enhancement_ratio(estimate, reference)
        else:
            logger.warning(
                f"{reference.condition_id}: stiffness without BLS is {reference.k:g}; "
                f"no enhancement ratio for {estimate.condition_id}"
            )
            ratio = float("nan")
        rows.append({
            "bending_angle_deg": estimate.bending_angle,
            "pressure_kPa": estimate.pressure,
            "weight_kg": estimate.weight,
            "with_condition": estimate.condition_id,
            "without_condition": reference.condition_id,
            "k_with_N_per_mm": estimate.k,
            "k_without_N_per_mm": reference.k,
            "ratio": ratio,
        })
    return rows


def _group_extent(members: Sequence[StiffnessEstimate]) -> ModulationRange:
    k_min = min(member.k for member in members)
    if k_min > 0:
        return modulation_range(members)
    # A zero-stiffness member (constant force) leaves the ratio undefined.
    logger.warning(
        f"{[member.condition_id for member in members]}: minimum stiffness is {k_min:g}; no modulation ratio"
    )
    return ModulationRange(k_min=k_min, k_max=max(member.k for member in members), ratio=float("nan"))


def _modulation_rows(estimates: Sequence[StiffnessEstimate]) -> List[dict]:
    rows = []
    sweeps = (
        ("pressure", lambda e: (e.experiment, e.bending_angle, e.weight, e.bls_present),
         lambda e: f"weight {e.weight:g} kg, bls {int(e.bls_present)}"),
        ("weight", lambda e: (e.experiment, e.bending_angle, e.pressure, e.bls_present),
         lambda e: f"pressure {e.pressure:g} kPa, bls {int(e.bls_present)}"),
    )
    for name, key, describe in sweeps:
        groups: Dict[tuple, List[StiffnessEstimate]] = defaultdict(list)
        for estimate in estimates:
            if name == "weight" and not estimate.bls_present:
                continue
            groups[key(estimate)].append(estimate)
        for group_key in sorted(groups):
            members = groups[group_key]
            if len({getattr(member, name) for member in members}) < 2:
                continue
            extent = _group_extent(members)
            rows.append({
                "experiment": group_key[0],
                "bending_angle_deg": group_key[1],
                "swept_field": name,
                "fixed": describe(members[0]),
                "n_conditions": len(members),
                "k_min_N_per_mm": extent.k_min,
                "k_max_N_per_mm": extent.k_max,
                "ratio": extent.ratio,
            })
    return rows


def _model_rows(estimates: Sequence[StiffnessEstimate], model: ModelSetup) -> List[dict]:
    rows = []
    for estimate in estimates:
        if not estimate.bls_present:
            continue
        arc = ArcGeometry(C=model.C, alpha=degrees_to_radians(estimate.bending_angle))
        k_model = closed_form_stiffness(model.material, model.section, arc)
        rows.append({
            "bending_angle_deg": estimate.bending_angle,
            "condition_id": estimate.condition_id,
            "k_measured_N_per_mm": estimate.k,
            "k_model_N_per_mm": k_model,
            "model_over_measured": k_model / estimate.k if estimate.k > 0 else float("nan"),
        })
    return rows


def build_summary_report(
    estimates: Sequence[StiffnessEstimate],
    fingertip_rows: Optional[Iterable[Tuple[str, float, float]]] = None,
    model: Optional[ModelSetup] = None,
) -> SummaryReport:
    """
    Assemble the per-angle stiffness tables, enhancement ratios and modulation ranges.

    Enhancement pairs match every with-BLS condition to the without-BLS condition of the same
    experiment, angle and pressure. Modulation ranges are taken over pressure (angle, weight and BLS
    fixed) and over rope weight (angle and pressure fixed, BLS attached). With a model setup, the
    closed-form stiffness is listed next to each measured with-BLS value without any correction.
    """
    if not estimates:
        raise ValidationError("no stiffness estimates to report")
    ordered = sorted(estimates, key=lambda e: (e.bending_angle, e.condition_id))

    enhancement = pd.DataFrame(_enhancement_pairs(ordered), columns=ENHANCEMENT_COLUMNS)
    ratios = dict(zip(enhancement["with_condition"], enhancement["ratio"]))

    stiffness = pd.DataFrame([
        {
            "condition_id": e.condition_id,
            "bending_angle_deg": e.bending_angle,
            "pressure_kPa": e.pressure,
            "weight_kg": e.weight,
            "bls_present": int(e.bls_present),
            "k_N_per_mm": e.k,
            "intercept_N": e.intercept,
            "r_squared": e.r_squared,
            "n_points": e.n_points,
            "estimator": e.estimator,
            "degenerate": e.degenerate,
            "enhancement_ratio": ratios.get(e.condition_id, float("nan")),
        }
        for e in ordered
    ], columns=STIFFNESS_COLUMNS)

    modulation = pd.DataFrame(_modulation_rows(ordered), columns=MODULATION_COLUMNS)
    fingertip = fingertip_table(fingertip_rows) if fingertip_rows is not None else None
    comparison = pd.DataFrame(_model_rows(ordered, model), columns=MODEL_COLUMNS) if model is not None else None

    logger.info(
        f"Summary report: {len(stiffness)} conditions, {len(enhancement)} enhancement pairs, "
        f"{len(modulation)} modulation ranges"
    )
    return SummaryReport(
        stiffness=stiffness,
        enhancement=enhancement,
        modulation=modulation,
        fingertip=fingertip,
        model_comparison=comparison,
        estimates=list(ordered),
    )
