"""
Module: measurements.py
Description: Force-displacement measurement records: the CSV file contract, a strict parser with
             positional error reporting, the inverse serializer and a deterministic fixture generator.
"""

import io
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.data.reference_data import MIN_BENDING_STIFFNESS, PEAK_BENDING_STIFFNESS
from src.errors import DomainError, FileAccessError, MeasurementFormatError
from src.models.quantities import Degree, KiloPascal, Kilogram, Millimetre, Newton, NewtonPerMillimetre

logger = logging.getLogger(__name__)

MEASUREMENT_COLUMNS = [
    "condition_id",
    "bending_angle_deg",
    "pressure_kPa",
    "weight_kg",
    "bls_present",
    "displacement_mm",
    "force_N",
]
_NUMERIC_COLUMNS = ["bending_angle_deg", "pressure_kPa", "weight_kg", "displacement_mm", "force_N"]


@dataclass(frozen=True)
class MeasurementRecord:
    condition_id: str
    bending_angle: Degree
    pressure: KiloPascal
    weight: Kilogram
    bls_present: bool
    displacement: Millimetre
    force: Newton

    @property
    def condition(self) -> Tuple[float, float, float, bool]:
        return (self.bending_angle, self.pressure, self.weight, self.bls_present)


def _check_value(column: str, value: float) -> str:
    """Return a reason string when the value violates the column's range, else ''."""
    if not math.isfinite(value):
        return f"value must be finite, got {value}"
    if column == "bending_angle_deg" and not (0.0 <= value < 360.0):
        return f"bending angle must lie in [0, 360), got {value:g}"
    if value < 0.0:
        return f"value must be non-negative, got {value:g}"
    return ""


def _read_frame(csv_source) -> pd.DataFrame:
    if isinstance(csv_source, (bytes, bytearray)):
        csv_source = io.BytesIO(bytes(csv_source))
    try:
        return pd.read_csv(
            csv_source,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            encoding="utf-8",
        )
    except (FileNotFoundError, PermissionError, IsADirectoryError) as e:
        logger.error(f"Cannot read measurement file {csv_source}: {e}")
        raise FileAccessError(str(e.strerror or e), str(csv_source)) from e
    except pd.errors.EmptyDataError as e:
        raise MeasurementFormatError([(1, "*", "file is empty; a header row is required")]) from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise MeasurementFormatError([(1, "*", f"unreadable CSV: {e}")]) from e


def parse_measurements(csv_source: Union[str, Path, bytes, io.IOBase]) -> List[MeasurementRecord]:
    """
    Parse a measurement CSV into records, or fail with every problem located by line and column.

    Parameters:
        csv_source: Path to the file, the raw bytes, or an open text/binary stream.

    Returns:
        List[MeasurementRecord]: Records in file order.
    """
    frame = _read_frame(csv_source)

    header_issues = [(1, column, "missing column") for column in MEASUREMENT_COLUMNS if column not in frame.columns]
    header_issues += [(1, column, "unexpected column") for column in frame.columns if column not in MEASUREMENT_COLUMNS]
    if header_issues:
        raise MeasurementFormatError(header_issues)

    issues: List[Tuple[int, str, str]] = []
    records: List[MeasurementRecord] = []
    seen_points: Dict[Tuple[str, float], int] = {}
    conditions: Dict[str, Tuple[Tuple[float, float, float, bool], int]] = {}

    for position, row in enumerate(frame.itertuples(index=False)):
        line = position + 2
        raw = {column: (value if isinstance(value, str) else "") for column, value in zip(frame.columns, row)}
        if all(value.strip() == "" for value in raw.values()):
            continue

        row_issues = []
        condition_id = raw["condition_id"].strip()
        if not condition_id:
            row_issues.append((line, "condition_id", "condition id must not be empty"))

        values: Dict[str, float] = {}
        for column in _NUMERIC_COLUMNS:
            text = raw[column].strip()
            try:
                value = float(text)
            except ValueError:
                row_issues.append((line, column, f"not a number: {text!r}"))
                continue
            reason = _check_value(column, value)
            if reason:
                row_issues.append((line, column, reason))
            values[column] = value

        flag = raw["bls_present"].strip()
        if flag not in ("0", "1"):
            row_issues.append((line, "bls_present", f"must be 0 or 1, got {flag!r}"))

        if row_issues:
            issues.extend(row_issues)
            continue

        record = MeasurementRecord(
            condition_id=condition_id,
            bending_angle=values["bending_angle_deg"],
            pressure=values["pressure_kPa"],
            weight=values["weight_kg"],
            bls_present=flag == "1",
            displacement=values["displacement_mm"],
            force=values["force_N"],
        )

        point = (condition_id, record.displacement)
        if point in seen_points:
            issues.append((line, "displacement_mm",
                           f"duplicate displacement {record.displacement:g} mm for condition {condition_id!r} "
                           f"(first on line {seen_points[point]})"))
            continue
        seen_points[point] = line

        if condition_id in conditions and conditions[condition_id][0] != record.condition:
            issues.append((line, "condition_id",
                           f"condition {condition_id!r} changes its angle/pressure/weight/BLS fields "
                           f"(first defined on line {conditions[condition_id][1]})"))
            continue
        conditions.setdefault(condition_id, (record.condition, line))
        records.append(record)

    if issues:
        raise MeasurementFormatError(issues)
    logger.info(f"Parsed {len(records)} measurement records in {len(conditions)} conditions")
    return records


def records_to_frame(records: Sequence[MeasurementRecord]) -> pd.DataFrame:
    """Records as a DataFrame with the file contract's columns and dtypes."""
    return pd.DataFrame({
        "condition_id": pd.Series([r.condition_id for r in records], dtype=object),
        "bending_angle_deg": pd.Series([r.bending_angle for r in records], dtype=float),
        "pressure_kPa": pd.Series([r.pressure for r in records], dtype=float),
        "weight_kg": pd.Series([r.weight for r in records], dtype=float),
        "bls_present": pd.Series([int(r.bls_present) for r in records], dtype=int),
        "displacement_mm": pd.Series([r.displacement for r in records], dtype=float),
        "force_N": pd.Series([r.force for r in records], dtype=float),
    }, columns=MEASUREMENT_COLUMNS)


def serialize_measurements(records: Sequence[MeasurementRecord]) -> bytes:
    """Inverse of parse_measurements: UTF-8, LF endings, %.9g numbers, bls_present as 0/1."""
    text = records_to_frame(records).to_csv(index=False, float_format="%.9g", lineterminator="\n")
    return text.encode("utf-8")


@dataclass(frozen=True)
class FixtureCondition:
    condition_id: str
    slope: NewtonPerMillimetre
    intercept: Newton = 0.0
    bending_angle: Degree = 0.0
    pressure: KiloPascal = 0.0
    weight: Kilogram = 0.0
    bls_present: bool = True


@dataclass(frozen=True)
class FixtureSpec:
    conditions: Tuple[FixtureCondition, ...]
    n_points: int = 11
    step_mm: float = 1.0
    noise_sigma: float = 0.0
    seed: int = 0


def generate_fixtures(spec: FixtureSpec) -> bytes:
    """
    Synthetic force-displacement data F = slope * d + intercept (+ seeded Gaussian noise).

    Displacements run 0, step, 2*step, ... like the sliding-table protocol. Negative forces produced
    by noise are clipped to zero. Identical specs give identical bytes.
    """
    if spec.n_points < 3:
        raise DomainError(f"at least 3 points per condition are required, got {spec.n_points}", field="n_points")
    if not (spec.step_mm > 0) or spec.noise_sigma < 0:
        raise DomainError("step must be positive and noise non-negative", field="step_mm")

    rng = np.random.default_rng(spec.seed)
    displacements = np.arange(spec.n_points) * spec.step_mm
    records: List[MeasurementRecord] = []
    for condition in spec.conditions:
        if not (condition.slope > 0):
            raise DomainError(f"fixture slope must be positive, got {condition.slope}", field="slope")
        forces = condition.slope * displacements + condition.intercept
        if spec.noise_sigma > 0:
            forces = forces + rng.normal(0.0, spec.noise_sigma, size=len(displacements))
        forces = np.clip(forces, 0.0, None)
        records.extend(
            MeasurementRecord(
                condition_id=condition.condition_id,
                bending_angle=condition.bending_angle,
                pressure=condition.pressure,
                weight=condition.weight,
                bls_present=condition.bls_present,
                displacement=float(d),
                force=float(f),
            )
            for d, f in zip(displacements, forces)
        )
    return serialize_measurements(records)


def reference_endpoint_fixture(n_points: int = 11, noise_sigma: float = 0.0, seed: int = 0) -> FixtureSpec:
    """
    Conditions whose slopes reproduce the published stiffness endpoints.

    Lateral series ("lateral:<angle>:...") pair a free actuator with BLS-equipped ones at 0 kg and
    2 kg rope weight; the bending series ("bending:45:p<kPa>") sweeps chamber pressure at 45 degrees.
    """
    lateral = [
        # angle, pressure, k without BLS, k with BLS at 0 kg, k with BLS at 2 kg
        (0.0, 0.0, 0.10, 0.28, 0.42),
        (45.0, 30.0, 0.12, 0.35, 0.42),
        (90.0, 50.0, 0.12, 0.22, 0.264),
    ]
    conditions = []
    for angle, pressure, free, light, heavy in lateral:
        tag = f"lateral:{angle:g}"
        conditions += [
            FixtureCondition(f"{tag}:free", free, bending_angle=angle, pressure=pressure, bls_present=False),
            FixtureCondition(f"{tag}:w0", light, bending_angle=angle, pressure=pressure, weight=0.0),
            FixtureCondition(f"{tag}:w2", heavy, bending_angle=angle, pressure=pressure, weight=2.0),
        ]
    for pressure, slope in ((20.0, MIN_BENDING_STIFFNESS), (30.0, 0.45), (40.0, PEAK_BENDING_STIFFNESS)):
        conditions.append(
            FixtureCondition(f"bending:45:p{pressure:g}", slope, bending_angle=45.0, pressure=pressure)
        )
    return FixtureSpec(conditions=tuple(conditions), n_points=n_points, noise_sigma=noise_sigma, seed=seed)
