"""
Module: visualization.py
Description: Static SVG line chart for sweep tables. One polyline per aspect ratio, fixed
             800x600 view box, no external references, and deterministic element order so the
             same table always renders to the same bytes.
"""

import xml.etree.ElementTree as ET
from typing import List, Tuple

import numpy as np
import pandas as pd

WIDTH = 800
HEIGHT = 600
MARGIN_LEFT = 80
MARGIN_RIGHT = 150
MARGIN_TOP = 40
MARGIN_BOTTOM = 70
N_TICKS = 5

SERIES_COLORS = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
]


def get_color(index: int) -> str:
    """
    Determine the stroke color of a series.

    Parameters:
        index (int): Position of the series in the legend.

    Returns:
        str: Hex color, cycling through the palette.
    """
    return SERIES_COLORS[index % len(SERIES_COLORS)]


def _padded_domain(values: np.ndarray) -> Tuple[float, float]:
    low = float(np.min(values))
    high = float(np.max(values))
    if high - low <= 1e-12 * max(abs(high), 1.0):
        pad = 0.1 * abs(high) if high != 0 else 0.5
        return low - pad, high + pad
    pad = 0.05 * (high - low)
    return low - pad, high + pad


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _sub(parent: ET.Element, tag: str, text: str = None, **attributes) -> ET.Element:
    element = ET.SubElement(parent, tag, {key.replace("_", "-"): str(value) for key, value in attributes.items()})
    if text is not None:
        element.text = text
    return element


def render_sweep_svg(table: pd.DataFrame) -> str:
    """
    Render a sweep table as an SVG document.

    The y quantity is the stiffness when the table carries one, F(alpha) otherwise.

    Parameters:
        table (pd.DataFrame): Sweep rows with lambda, alpha_rad, F_alpha, k_N_per_mm columns.

    Returns:
        str: The SVG document.
    """
    use_stiffness = bool(table["k_N_per_mm"].notna().all())
    y_column = "k_N_per_mm" if use_stiffness else "F_alpha"
    y_label = "k (N/mm)" if use_stiffness else "F(alpha)"

    x_low, x_high = float(table["alpha_rad"].min()), float(table["alpha_rad"].max())
    if x_high == x_low:
        x_low, x_high = x_low - 0.5, x_high + 0.5
    y_low, y_high = _padded_domain(table[y_column].to_numpy(dtype=float))

    plot_left, plot_right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    plot_top, plot_bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM

    def to_x(value: float) -> float:
        return plot_left + (value - x_low) / (x_high - x_low) * (plot_right - plot_left)

    def to_y(value: float) -> float:
        return plot_bottom - (value - y_low) / (y_high - y_low) * (plot_bottom - plot_top)

    svg = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "width": str(WIDTH),
        "height": str(HEIGHT),
        "viewBox": f"0 0 {WIDTH} {HEIGHT}",
        "font-family": "sans-serif",
        "font-size": "12",
    })
    _sub(svg, "rect", x=0, y=0, width=WIDTH, height=HEIGHT, fill="white")

    axes = _sub(svg, "g", id="axes", stroke="black", stroke_width=1)
    _sub(axes, "line", x1=plot_left, y1=plot_bottom, x2=plot_right, y2=plot_bottom)
    _sub(axes, "line", x1=plot_left, y1=plot_bottom, x2=plot_left, y2=plot_top)

    ticks = _sub(svg, "g", id="ticks")
    for value in np.linspace(x_low, x_high, N_TICKS):
        x = _fmt(to_x(value))
        _sub(ticks, "line", x1=x, y1=plot_bottom, x2=x, y2=plot_bottom + 5, stroke="black")
        _sub(ticks, "text", f"{value:.3g}", x=x, y=plot_bottom + 20, text_anchor="middle")
    for value in np.linspace(y_low, y_high, N_TICKS):
        y = _fmt(to_y(value))
        _sub(ticks, "line", x1=plot_left - 5, y1=y, x2=plot_left, y2=y, stroke="black")
        _sub(ticks, "text", f"{value:.3g}", x=plot_left - 8, y=y, text_anchor="end", dominant_baseline="middle")

    labels = _sub(svg, "g", id="labels")
    _sub(labels, "text", "bending angle (rad)",
         x=_fmt((plot_left + plot_right) / 2), y=HEIGHT - 20, text_anchor="middle")
    _sub(labels, "text", y_label, x=20, y=_fmt((plot_top + plot_bottom) / 2), text_anchor="middle",
         transform=f"rotate(-90 20 {_fmt((plot_top + plot_bottom) / 2)})")

    series_group = _sub(svg, "g", id="series", fill="none", stroke_width=2)
    legend = _sub(svg, "g", id="legend")
    aspect_ratios: List[float] = sorted(table["lambda"].unique())
    for index, aspect_ratio in enumerate(aspect_ratios):
        rows = table[table["lambda"] == aspect_ratio].sort_values("alpha_rad", kind="mergesort")
        points = " ".join(
            f"{_fmt(to_x(a))},{_fmt(to_y(v))}" for a, v in zip(rows["alpha_rad"], rows[y_column])
        )
        color = get_color(index)
        _sub(series_group, "polyline", points=points, stroke=color)

        y = plot_top + 10 + 20 * index
        _sub(legend, "line", x1=plot_right + 15, y1=y, x2=plot_right + 40, y2=y, stroke=color, stroke_width=2)
        _sub(legend, "text", f"lambda = {aspect_ratio:g}", x=plot_right + 45, y=y, dominant_baseline="middle")

    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(svg, encoding="unicode") + "\n"
