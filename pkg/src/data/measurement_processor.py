"""
Module: measurement_processor.py
Description: Per-condition window queries over measurement frames: consecutive force/displacement
             increments and condition summaries. Uses DuckDB for in-memory SQL processing.
"""

import logging
from typing import Optional, Tuple

import duckdb
import pandas as pd

logger = logging.getLogger(__name__)

INCREMENT_COLUMNS = [
    "condition_id",
    "previous_displacement_mm",
    "displacement_mm",
    "delta_displacement_mm",
    "delta_force_N",
    "incremental_ratio_N_per_mm",
]


def _run(query: str, frame: pd.DataFrame, parameters: Optional[list] = None) -> pd.DataFrame:
    conn = duckdb.connect(database=":memory:")
    try:
        conn.register("measurements", frame)
        return conn.execute(query, parameters or []).fetchdf()
    finally:
        conn.unregister("measurements")
        conn.close()


def incremental_ratio_table(
    measurements_df: pd.DataFrame, window: Optional[Tuple[float, float]] = None
) -> pd.DataFrame:
    """
    Incremental ratios dF/dd between consecutive displacement stations of each condition.

    The input DataFrame must include at least:
      - condition_id
      - displacement_mm
      - force_N

    Points outside the displacement window (inclusive bounds, default: all points) are dropped before
    pairing, so each ratio uses two neighbouring stations inside the window.

    Returns a DataFrame with columns INCREMENT_COLUMNS, ordered by condition_id and displacement.
    """
    if window is None:
        window = (float(measurements_df["displacement_mm"].min()), float(measurements_df["displacement_mm"].max()))
    low, high = window
    query = """
    WITH windowed AS (
        SELECT condition_id, displacement_mm, force_N
        FROM measurements
        WHERE displacement_mm >= ? AND displacement_mm <= ?
    ),
    paired AS (
        SELECT
            condition_id,
            displacement_mm,
            force_N,
            LAG(displacement_mm) OVER (PARTITION BY condition_id ORDER BY displacement_mm) AS previous_displacement_mm,
            LAG(force_N) OVER (PARTITION BY condition_id ORDER BY displacement_mm) AS previous_force_N
        FROM windowed
    )
    SELECT
        condition_id,
        previous_displacement_mm,
        displacement_mm,
        displacement_mm - previous_displacement_mm AS delta_displacement_mm,
        force_N - previous_force_N AS delta_force_N,
        (force_N - previous_force_N) / (displacement_mm - previous_displacement_mm) AS incremental_ratio_N_per_mm
    FROM paired
    WHERE previous_displacement_mm IS NOT NULL
    ORDER BY condition_id, displacement_mm;
    """
    increments = _run(query, measurements_df[["condition_id", "displacement_mm", "force_N"]], [float(low), float(high)])
    logger.info(f"Computed {len(increments)} incremental ratios")
    return increments[INCREMENT_COLUMNS]


def summarize_conditions(measurements_df: pd.DataFrame) -> pd.DataFrame:
    """
    One row per condition with its fixed fields and the span of its displacement sweep.

    Parameters:
        measurements_df (pd.DataFrame): Frame built by records_to_frame.

    Returns:
        pd.DataFrame: condition_id, bending_angle_deg, pressure_kPa, weight_kg, bls_present,
        n_points, min_displacement_mm, max_displacement_mm, max_force_N.
    """
    query = """
    SELECT
        condition_id,
        FIRST(bending_angle_deg) AS bending_angle_deg,
        FIRST(pressure_kPa) AS pressure_kPa,
        FIRST(weight_kg) AS weight_kg,
        FIRST(bls_present) AS bls_present,
        COUNT(*) AS n_points,
        MIN(displacement_mm) AS min_displacement_mm,
        MAX(displacement_mm) AS max_displacement_mm,
        MAX(force_N) AS max_force_N
    FROM measurements
    GROUP BY condition_id
    ORDER BY condition_id;
    """
    return _run(query, measurements_df)
