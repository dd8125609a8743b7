import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from src.errors import ConfigurationError, FileAccessError, ValidationError
from src.models.design_explorer import (
    DEFAULT_ASPECT_RATIOS,
    MAX_AT_ALPHA,
    SWEEP_COLUMNS,
    SectionSearchSpec,
    SweepSpec,
    emit_csv,
    emit_svg,
    find_best_section,
    run_sweep,
    sweep_to_csv,
)
from src.models.mechanics import ArcGeometry, BeamSection, closed_form_stiffness, evaluation_function

SVG_NS = "{http://www.w3.org/2000/svg}"


def series(table, aspect_ratio):
    return table[np.isclose(table["lambda"], aspect_ratio, rtol=0, atol=1e-12)].reset_index(drop=True)


def is_strictly_monotone(values, increasing=True):
    steps = np.diff(np.asarray(values, dtype=float))
    return bool(np.all(steps > 0)) if increasing else bool(np.all(steps < 0))


def test_default_sweep_covers_all_aspect_ratios():
    table = run_sweep(SweepSpec())
    assert list(table.columns) == SWEEP_COLUMNS
    assert len(table) == len(DEFAULT_ASPECT_RATIOS) * 64
    assert sorted(table["lambda"].unique()) == list(DEFAULT_ASPECT_RATIOS)
    assert table["k_N_per_mm"].isna().all()
    assert table["alpha_rad"].min() == 0.0
    assert table["alpha_rad"].max() == pytest.approx(math.pi)


def test_sweep_rows_are_sorted_by_lambda_then_alpha():
    table = run_sweep(SweepSpec(lambda_values=(2.0, 0.5), n_alpha=5))
    assert list(table["lambda"]) == [0.5] * 5 + [2.0] * 5
    assert is_strictly_monotone(series(table, 0.5)["alpha_rad"])


def test_minimal_sweep_has_two_rows_per_lambda():
    table = run_sweep(SweepSpec(n_alpha=2))
    assert table.groupby("lambda").size().eq(2).all()


def test_sweep_values_match_evaluation_function():
    table = run_sweep(SweepSpec(lambda_values=(1.5,), alpha_range=(0.2, 3.0), n_alpha=7, nu=0.3))
    for alpha, f_alpha in zip(table["alpha_rad"], table["F_alpha"]):
        assert f_alpha == pytest.approx(evaluation_function(alpha, 0.3, 1.5).F_alpha, rel=1e-13)


def test_sweep_with_physical_parameters(material):
    table = run_sweep(SweepSpec(lambda_values=(1.0, 2.0), n_alpha=4), material, BeamSection(h=10.0, b=10.0), 100.0)
    tall = series(table, 2.0)
    prefactor = 4.0 * 2000.0 * (20.0 * 10.0 ** 3 / 12.0) / 100.0 ** 3
    assert np.allclose(tall["k_N_per_mm"], prefactor * tall["F_alpha"], rtol=1e-12)


def test_sweep_requires_complete_physical_parameters(material):
    with pytest.raises(ConfigurationError):
        run_sweep(SweepSpec(), mat=material)


@pytest.mark.parametrize(
    "kwargs, field_path",
    [
        ({"lambda_values": ()}, "lambda_values"),
        ({"lambda_values": (1.0, -2.0)}, "lambda_values"),
        ({"alpha_range": (1.0, 0.5)}, "alpha_range"),
        ({"alpha_range": (0.0, 7.0)}, "alpha_range"),
        ({"n_alpha": 1}, "n_alpha"),
        ({"nu": 0.5}, "nu"),
    ],
)
def test_sweep_spec_validation(kwargs, field_path):
    with pytest.raises(ConfigurationError) as excinfo:
        SweepSpec(**kwargs)
    assert excinfo.value.field_path == field_path


def test_tall_sections_stiffen_with_bending():
    table = run_sweep(SweepSpec(lambda_values=(2.0,), alpha_range=(0.05, math.pi), n_alpha=40))
    assert is_strictly_monotone(table["F_alpha"], increasing=True)


def test_flat_sections_soften_on_the_first_two_radians():
    table = run_sweep(SweepSpec(lambda_values=(0.25,), alpha_range=(0.1, 2.0), n_alpha=20))
    assert is_strictly_monotone(table["F_alpha"], increasing=False)


def test_section_search_respects_height_limit(material):
    spec = SectionSearchSpec(b_range=(10.0, 10.0), h_range=(5.0, 20.0), max_height=12.0)
    result = find_best_section(spec, material, 100.0)
    candidates = np.unique(np.linspace(5.0, 20.0, spec.resolution))
    assert result.feasible
    assert result.h == pytest.approx(candidates[candidates <= 12.0].max())
    assert result.b == 10.0
    assert result.table is not None
    assert result.objective_value == pytest.approx(result.table["k_N_per_mm"].min())


def test_section_search_at_single_angle(material):
    spec = SectionSearchSpec(
        b_range=(5.0, 10.0), h_range=(5.0, 10.0), objective=MAX_AT_ALPHA, alpha_star=math.pi / 2, resolution=6
    )
    result = find_best_section(spec, material, 100.0)
    assert (result.h, result.b) == (10.0, 10.0)


def test_section_search_reports_infeasible_limit(material):
    spec = SectionSearchSpec(b_range=(5.0, 10.0), h_range=(5.0, 10.0), max_height=2.0)
    result = find_best_section(spec, material, 100.0)
    assert not result.feasible
    assert result.h is None
    assert "max_height" in result.reason


def test_section_search_spec_requires_alpha_star():
    with pytest.raises(ConfigurationError) as excinfo:
        SectionSearchSpec(b_range=(5.0, 10.0), h_range=(5.0, 10.0), objective=MAX_AT_ALPHA)
    assert excinfo.value.field_path == "alpha_star"


def test_sweep_csv_format():
    table = run_sweep(SweepSpec(lambda_values=(1.0,), n_alpha=2))
    text = sweep_to_csv(table)
    lines = text.split("\n")
    assert lines[0] == "lambda,alpha_rad,F_alpha,k_N_per_mm"
    assert lines[1] == "1,0,0.75,"
    assert lines[2].startswith("1,3.14159265,")
    assert text.endswith("\n") and "\r" not in text


def test_sweep_outputs_are_byte_identical(tmp_path):
    table = run_sweep(SweepSpec(n_alpha=16))
    for name in ("a", "b"):
        emit_csv(table, tmp_path / f"{name}.csv")
        emit_svg(run_sweep(SweepSpec(n_alpha=16)), tmp_path / f"{name}.svg")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_svg_has_one_polyline_per_aspect_ratio(tmp_path):
    emit_svg(run_sweep(SweepSpec(n_alpha=8)), tmp_path / "sweep.svg")
    root = ET.parse(tmp_path / "sweep.svg").getroot()
    assert root.get("viewBox") == "0 0 800 600"
    polylines = root.findall(f".//{SVG_NS}polyline")
    assert len(polylines) == len(DEFAULT_ASPECT_RATIOS)
    assert all(len(p.get("points").split()) == 8 for p in polylines)
    labels = [text.text for text in root.iter(f"{SVG_NS}text")]
    assert "lambda = 0.25" in labels
    assert "bending angle (rad)" in labels


def test_emit_to_missing_directory_fails(tmp_path):
    table = run_sweep(SweepSpec(n_alpha=2))
    with pytest.raises(FileAccessError):
        emit_csv(table, tmp_path / "missing" / "sweep.csv")


def test_empty_table_is_rejected():
    table = run_sweep(SweepSpec(n_alpha=2)).iloc[0:0]
    with pytest.raises(ValidationError):
        sweep_to_csv(table)


def test_section_search_matches_full_enumeration(material):
    spec = SectionSearchSpec(b_range=(5.0, 10.0), h_range=(5.0, 20.0), resolution=8)
    result = find_best_section(spec, material, 100.0)
    enumerated = max(
        min(
            closed_form_stiffness(material, BeamSection(h=float(h), b=float(b)), ArcGeometry(C=100.0, alpha=float(alpha)))
            for alpha in spec.alpha_grid
        )
        for h in np.linspace(5.0, 20.0, 8)
        for b in np.linspace(5.0, 10.0, 8)
    )
    assert result.objective_value == pytest.approx(enumerated, rel=1e-10)


def test_worst_case_objective_prefers_tall_sections(material):
    spec = SectionSearchSpec(b_range=(5.0, 5.0), h_range=(2.0, 15.0), resolution=8)
    result = find_best_section(spec, material, 100.0)
    assert result.b == 5.0
    assert result.h / result.b >= 1.0


def test_height_limit_at_range_minimum_leaves_one_height(material):
    spec = SectionSearchSpec(b_range=(4.0, 12.0), h_range=(4.0, 12.0), max_height=4.0, resolution=6)
    result = find_best_section(spec, material, 100.0)
    assert result.feasible
    assert result.h == 4.0
    assert np.allclose(result.table["lambda"], 4.0 / result.b)
