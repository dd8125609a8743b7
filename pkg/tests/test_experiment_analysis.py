import logging
import math

import pytest

from src.data import reference_data
from src.data.measurements import (
    FixtureCondition,
    FixtureSpec,
    MeasurementRecord,
    generate_fixtures,
    parse_measurements,
)
from src.errors import ConditionMismatchError, DomainError, ValidationError
from src.models.experiment_analysis import (
    INCREMENTAL,
    ModelSetup,
    StiffnessEstimate,
    build_summary_report,
    enhancement_ratio,
    experiment_of,
    fingertip_table,
    fit_all,
    fit_stiffness,
    modulation_range,
    swept_field,
)
from src.models.mechanics import ArcGeometry, BeamSection, Material, closed_form_stiffness


def _records(slope: float, intercept: float = 0.0, noise: float = 0.0, seed: int = 0, **fields):
    spec = FixtureSpec(
        conditions=(FixtureCondition("c", slope, intercept=intercept, **fields),), noise_sigma=noise, seed=seed
    )
    return parse_measurements(generate_fixtures(spec))


def _estimate(condition_id: str, k: float, **fields) -> StiffnessEstimate:
    return StiffnessEstimate(condition_id=condition_id, k=k, intercept=0.0, r_squared=1.0, n_points=11, **fields)


def test_fit_recovers_exact_linear_data():
    estimate = fit_stiffness(_records(0.35, intercept=0.5))
    assert estimate.k == pytest.approx(0.35, abs=1e-9)
    assert estimate.intercept == pytest.approx(0.5, abs=1e-9)
    assert estimate.r_squared == pytest.approx(1.0)
    assert estimate.n_points == 11
    assert not estimate.degenerate


def test_fit_recovers_peak_bending_stiffness():
    estimate = fit_stiffness(_records(reference_data.PEAK_BENDING_STIFFNESS))
    assert estimate.k == pytest.approx(0.70, abs=1e-9)


def test_constant_force_is_flagged_degenerate(caplog):
    records = [MeasurementRecord("flat", 0.0, 0.0, 0.0, True, float(d), 1.2) for d in range(11)]
    with caplog.at_level(logging.WARNING, logger="src.models.experiment_analysis"):
        estimate = fit_stiffness(records)
    assert estimate.k == 0.0
    assert estimate.r_squared == 0.0
    assert estimate.degenerate
    assert "constant" in caplog.text


def test_noisy_fit_stays_close_to_truth():
    for seed in range(5):
        estimate = fit_stiffness(_records(0.35, noise=0.01, seed=seed))
        assert abs(estimate.k - 0.35) < 0.02
        assert 0.0 <= estimate.r_squared <= 1.0


def test_incremental_estimator_agrees_on_linear_data():
    records = _records(0.42, intercept=0.1)
    ols = fit_stiffness(records)
    incremental = fit_stiffness(records, estimator=INCREMENTAL)
    assert incremental.k == pytest.approx(ols.k, abs=1e-9)
    assert incremental.estimator == INCREMENTAL
    assert incremental.r_squared == pytest.approx(1.0)


def test_fit_window_limits_points():
    estimate = fit_stiffness(_records(0.35), window=(0.0, 4.0))
    assert estimate.n_points == 5


def test_fit_needs_three_distinct_displacements():
    with pytest.raises(ValidationError):
        fit_stiffness(_records(0.35), window=(0.0, 1.0))
    with pytest.raises(ValidationError):
        fit_stiffness([])


def test_fit_rejects_mixed_conditions():
    records = [MeasurementRecord(name, 0.0, 0.0, 0.0, True, float(d), float(d)) for name in "ab" for d in range(3)]
    with pytest.raises(ConditionMismatchError):
        fit_stiffness(records)


def test_fit_rejects_unknown_estimator():
    with pytest.raises(ValidationError):
        fit_stiffness(_records(0.35), estimator="median")


def test_fit_all_orders_conditions(reference_fixture_bytes):
    estimates = fit_all(parse_measurements(reference_fixture_bytes))
    ids = [estimate.condition_id for estimate in estimates]
    assert ids == sorted(ids)
    assert len(ids) == 12


def test_estimate_invariants():
    with pytest.raises(DomainError):
        StiffnessEstimate("c", 0.3, 0.0, 1.2, 11)
    with pytest.raises(DomainError):
        StiffnessEstimate("c", 0.3, 0.0, 0.9, 2)


def test_experiment_prefix():
    assert experiment_of("lateral:0:w2") == "lateral"
    assert experiment_of("plain") == ""


def test_enhancement_ratio_reference_case():
    with_bls = _estimate("w", 0.42, bending_angle=0.0, bls_present=True)
    without_bls = _estimate("f", 0.10, bending_angle=0.0, bls_present=False)
    assert enhancement_ratio(with_bls, without_bls) == pytest.approx(4.2)


def test_enhancement_ratio_identity():
    assert enhancement_ratio(_estimate("w", 0.3), _estimate("f", 0.3, bls_present=False)) == 1.0


@pytest.mark.parametrize(
    "with_fields, without_fields",
    [
        ({"bending_angle": 45.0}, {"bending_angle": 90.0, "bls_present": False}),
        ({"pressure": 30.0}, {"pressure": 50.0, "bls_present": False}),
        ({}, {}),
        ({"bls_present": False}, {"bls_present": False}),
    ],
)
def test_enhancement_ratio_requires_matched_conditions(with_fields, without_fields):
    with pytest.raises(ConditionMismatchError):
        enhancement_ratio(_estimate("w", 0.3, **with_fields), _estimate("f", 0.1, **without_fields))


def test_enhancement_ratio_requires_positive_reference():
    with pytest.raises(DomainError):
        enhancement_ratio(_estimate("w", 0.3), _estimate("f", 0.0, bls_present=False))


def test_modulation_range_reference_case():
    estimates = [_estimate(f"p{p}", k, pressure=p) for p, k in ((20.0, 0.2), (30.0, 0.45), (40.0, 0.7))]
    k_min, k_max, ratio = modulation_range(estimates)
    assert (k_min, k_max) == (0.2, 0.7)
    assert ratio == pytest.approx(reference_data.BENDING_MODULATION)
    assert swept_field(estimates) == "pressure"


def test_modulation_range_small_swing():
    extent = modulation_range([_estimate("a", 0.35, pressure=10.0), _estimate("b", 0.46, pressure=20.0)])
    assert extent.ratio == pytest.approx(1.314, abs=1e-3)


def test_modulation_ratio_matches_its_extremes():
    estimates = [_estimate(f"w{w}", k, weight=w) for w, k in ((0.0, 0.28), (1.0, 0.35), (2.0, 0.42))]
    extent = modulation_range(estimates)
    lightest = _estimate("free", extent.k_min, weight=0.0, bls_present=False)
    heaviest = _estimate("heavy", extent.k_max, weight=2.0)
    assert extent.ratio == enhancement_ratio(heaviest, lightest)


def test_modulation_range_needs_two_estimates():
    with pytest.raises(ValidationError):
        modulation_range([_estimate("a", 0.3)])


def test_modulation_range_rejects_heterogeneous_conditions():
    with pytest.raises(ConditionMismatchError):
        modulation_range([_estimate("a", 0.3, pressure=10.0), _estimate("b", 0.4, pressure=20.0, weight=1.0)])


def test_fingertip_table_reference_rows():
    table = fingertip_table(reference_data.fingertip_rows())
    assert list(table["label"]) == ["BTSA", "Chen 2017", "Low 2020", "Abondance 2020", "Park 2018", "Zhang 2022"]
    assert table.loc[0, "force_N"] == 7.8
    assert table.loc[0, "pressure_kPa"] == 65.0
    assert list(table["is_max"]) == [True, False, False, False, False, False]


def test_fingertip_table_single_row():
    table = fingertip_table([("only", 1.0, 10.0)])
    assert bool(table.loc[0, "is_max"])


def test_btsa_fingertip_reference_is_consistent_with_table():
    assert round(reference_data.BTSA_FINGERTIP_FORCE_N, 1) == dict(
        (label, force) for label, force, _ in reference_data.FINGERTIP_COMPARISON
    )["BTSA"]


@pytest.mark.parametrize("rows", [[], [("bad", -1.0, 10.0)], [("bad", 1.0, -10.0)]])
def test_fingertip_table_validation(rows):
    with pytest.raises((ValidationError, DomainError)):
        fingertip_table(rows)


def test_reference_endpoints_are_reproduced(reference_fixture_bytes):
    report = build_summary_report(fit_all(parse_measurements(reference_fixture_bytes)))

    bending = report.stiffness[report.stiffness["condition_id"].str.startswith("bending")]
    assert bending["k_N_per_mm"].max() == pytest.approx(reference_data.PEAK_BENDING_STIFFNESS, abs=1e-9)

    heavy = report.enhancement[report.enhancement["weight_kg"] == 2.0].set_index("bending_angle_deg")
    for angle, target in reference_data.LATERAL_ENHANCEMENT.items():
        assert heavy.loc[angle, "ratio"] == pytest.approx(target, rel=1e-9)

    by_weight = report.modulation[
        (report.modulation["swept_field"] == "weight") & (report.modulation["experiment"] == "lateral")
    ].set_index("bending_angle_deg")
    for angle, target in reference_data.WEIGHT_MODULATION.items():
        assert by_weight.loc[angle, "ratio"] == pytest.approx(target, rel=1e-9)

    by_pressure = report.modulation[report.modulation["experiment"] == "bending"]
    assert len(by_pressure) == 1
    assert by_pressure.iloc[0]["swept_field"] == "pressure"
    assert by_pressure.iloc[0]["ratio"] == pytest.approx(reference_data.BENDING_MODULATION, rel=1e-9)


def test_report_stiffness_table_carries_enhancement_ratio(reference_fixture_bytes):
    report = build_summary_report(fit_all(parse_measurements(reference_fixture_bytes)))
    rows = report.stiffness.set_index("condition_id")
    assert rows.loc["lateral:0:w2", "enhancement_ratio"] == pytest.approx(4.2)
    assert rows.loc["lateral:0:w0", "enhancement_ratio"] == pytest.approx(2.8)
    assert math.isnan(rows.loc["lateral:0:free", "enhancement_ratio"])
    assert math.isnan(rows.loc["bending:45:p20", "enhancement_ratio"])
    assert sorted(report.per_angle()) == [0.0, 45.0, 90.0]


def test_report_model_comparison_is_uncorrected(reference_fixture_bytes):
    model = ModelSetup(material=Material(E=2000.0, nu=0.35), section=BeamSection(h=10.0, b=10.0), C=100.0)
    report = build_summary_report(
        fit_all(parse_measurements(reference_fixture_bytes)),
        fingertip_rows=reference_data.fingertip_rows(),
        model=model,
    )
    comparison = report.model_comparison.set_index("condition_id")
    assert "lateral:0:free" not in comparison.index
    expected = closed_form_stiffness(model.material, model.section, ArcGeometry(C=100.0, alpha=math.pi / 2))
    assert comparison.loc["lateral:90:w2", "k_model_N_per_mm"] == pytest.approx(expected)
    assert comparison.loc["lateral:90:w2", "k_measured_N_per_mm"] == pytest.approx(0.264)
    assert report.fingertip is not None and bool(report.fingertip.loc[0, "is_max"])


def test_report_requires_estimates():
    with pytest.raises(ValidationError):
        build_summary_report([])


def test_report_tolerates_zero_stiffness_reference(caplog):
    estimates = [
        _estimate("lat:free", 0.0, bls_present=False),
        _estimate("lat:w2", 0.3, weight=2.0),
        _estimate("lat:w0", 0.2, weight=0.0),
    ]
    with caplog.at_level(logging.WARNING, logger="src.models.experiment_analysis"):
        report = build_summary_report(estimates)
    assert report.enhancement["ratio"].isna().all()
    assert report.stiffness["enhancement_ratio"].isna().all()
    assert "no enhancement ratio" in caplog.text
    weight_sweep = report.modulation.iloc[0]
    assert weight_sweep["ratio"] == pytest.approx(1.5)


def test_report_tolerates_zero_stiffness_in_a_sweep():
    estimates = [_estimate(f"b:p{p:g}", k, pressure=p) for p, k in ((0.0, 0.0), (20.0, 0.2), (40.0, 0.7))]
    row = build_summary_report(estimates).modulation.iloc[0]
    assert (row["k_min_N_per_mm"], row["k_max_N_per_mm"]) == (0.0, 0.7)
    assert math.isnan(row["ratio"])
    with pytest.raises(DomainError):
        modulation_range(estimates)
