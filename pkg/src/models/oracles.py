"""
Module: oracles.py
Description: Independent numerical references for the closed-form stiffness model:
             composite-Simpson strain energy, finite-difference Castigliano displacement,
             a discretised straight-segment chain and a 3-D cross-product moment decomposition.

None of these call evaluation_function. The energy path relies only on internal_moments, which in
turn has its own vector oracle here.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import simpson

from src.config import QUADRATURE_INTERVALS
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

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Simpson rule over an even number of intervals."""

    n_intervals: int = QUADRATURE_INTERVALS
    rule: str = "composite-simpson"

    def __post_init__(self) -> None:
        n = self.n_intervals
        if isinstance(n, bool) or not isinstance(n, int) or n < 2 or n % 2:
            raise DomainError(f"interval count must be an even integer >= 2, got {n!r}", field="n_intervals")
        if self.rule != "composite-simpson":
            raise DomainError(f"unsupported quadrature rule {self.rule!r}", field="rule")


@dataclass(frozen=True)
class OracleReport:
    value: float
    reference: float
    abs_error: float
    rel_error: float

    @classmethod
    def compare(cls, value: float, reference: float) -> "OracleReport":
        abs_error = abs(value - reference)
        return cls(
            value=value,
            reference=reference,
            abs_error=abs_error,
            rel_error=abs_error / max(abs(reference), 1e-30),
        )

    def within(self, tolerance: float) -> bool:
        return self.rel_error <= tolerance


def straight_cantilever_compliance(mat: Material, sec: BeamSection, C: float) -> float:
    """Tip compliance C^3 / (3EI) of a straight cantilever, in mm/N."""
    return C ** 3 / (3.0 * mat.E * sec.I)


def strain_energy_quadrature(
    F_ext: float, mat: Material, sec: BeamSection, arc: ArcGeometry, spec: Optional[QuadratureSpec] = None
) -> float:
    """
    Strain energy U = int_0^alpha [M_b^2 / (2EI) + M_t^2 / (2G I_p)] R dphi by composite Simpson.

    Parameters:
        F_ext (float): Tip load perpendicular to the arc plane, N.
        mat (Material): Material constants.
        sec (BeamSection): Section properties.
        arc (ArcGeometry): Curved state; must not be straight.
        spec (QuadratureSpec, optional): Interval count; defaults to the configured value.

    Returns:
        float: Strain energy in N*mm.
    """
    if arc.is_straight:
        raise DomainError(
            "the energy quadrature runs over the bend angle; a straight beam has compliance C^3/(3EI)",
            field="alpha",
        )
    spec = spec or QuadratureSpec()
    phi = np.linspace(0.0, arc.alpha, spec.n_intervals + 1)
    bending, torsion = internal_moments(F_ext, arc, phi)
    density = (bending ** 2 / (2.0 * mat.E * sec.I) + torsion ** 2 / (2.0 * mat.G * sec.I_p)) * arc.R
    return float(simpson(density, x=phi))


def default_fd_step(F_ext: float) -> float:
    return max(1e-3 * abs(F_ext), 1e-6)


def displacement_castigliano_fd(
    F_ext: float,
    mat: Material,
    sec: BeamSection,
    arc: ArcGeometry,
    spec: Optional[QuadratureSpec] = None,
    step: Optional[float] = None,
) -> float:
    """Tip displacement dU/dF by a central difference of the quadrature energy, in mm."""
    if not (math.isfinite(F_ext) and F_ext > 0):
        raise DomainError(f"load must be positive, got {F_ext}", field="F_ext")
    step = default_fd_step(F_ext) if step is None else step
    if not (step < F_ext / 10.0):
        raise DomainError(f"step {step} is too large for load {F_ext} (must be < F/10)", field="step")
    if not (step >= 1e-9 * F_ext and step > 0):
        raise DomainError(f"step {step} is too small for load {F_ext}; cancellation dominates", field="step")

    upper = strain_energy_quadrature(F_ext + step, mat, sec, arc, spec)
    lower = strain_energy_quadrature(F_ext - step, mat, sec, arc, spec)
    return (upper - lower) / (2.0 * step)


def displacement_from_energy(
    F_ext: float, mat: Material, sec: BeamSection, arc: ArcGeometry, spec: Optional[QuadratureSpec] = None
) -> float:
    """delta = 2U/F, exact for a linear structure."""
    if not (math.isfinite(F_ext) and F_ext != 0):
        raise DomainError(f"load must be non-zero, got {F_ext}", field="F_ext")
    return 2.0 * strain_energy_quadrature(F_ext, mat, sec, arc, spec) / F_ext


def stiffness_via_quadrature(
    mat: Material,
    sec: BeamSection,
    arc: ArcGeometry,
    spec: Optional[QuadratureSpec] = None,
    F_ext: float = 1.0,
    evaluate: Evaluator = evaluation_function,
) -> OracleReport:
    """
    Compare the closed-form stiffness (value) with F / delta from the quadrature energy (reference).

    The evaluate hook lets verification substitute a deliberately broken evaluation function.
    """
    delta = displacement_castigliano_fd(F_ext, mat, sec, arc, spec)
    reference = F_ext / delta
    value = closed_form_stiffness(mat, sec, arc, evaluate)
    return OracleReport.compare(value, reference)


def _chain_nodes(arc: ArcGeometry, n_segments: int) -> np.ndarray:
    theta = np.linspace(0.0, arc.alpha, n_segments + 1)
    if arc.is_straight:
        return np.column_stack([np.linspace(0.0, arc.C, n_segments + 1), np.zeros(n_segments + 1)])
    return np.column_stack([arc.R * np.sin(theta), 2.0 * arc.R * np.sin(theta / 2.0) ** 2])


def discrete_chain_stiffness(
    n_segments: int, mat: Material, sec: BeamSection, arc: ArcGeometry, F_ext: float = 1.0
) -> float:
    """
    Stiffness of the arc replaced by n straight elastic segments with nodes on the arc.

    The tip deflection comes from the unit-load (virtual work) sum over segments of
    int [M_b^2 / EI + M_t^2 / (G I_p)] ds / F, with moments from r x F projected on each segment's
    own tangent and in-plane normal. Moments are linear along a straight segment, so Simpson's rule
    on the end and mid points integrates each segment exactly.
    """
    if isinstance(n_segments, bool) or not isinstance(n_segments, (int, np.integer)) or n_segments < 2:
        raise DomainError(f"at least 2 segments are required, got {n_segments!r}", field="N")

    nodes = _chain_nodes(arc, int(n_segments))
    tip = nodes[-1]
    starts = nodes[:-1]
    chords = nodes[1:] - starts
    lengths = np.hypot(chords[:, 0], chords[:, 1])
    tangents = chords / lengths[:, None]
    normals = np.column_stack([-tangents[:, 1], tangents[:, 0]])

    flexibility_b = 1.0 / (mat.E * sec.I)
    flexibility_t = 1.0 / (mat.G * sec.I_p)
    weights = (1.0, 4.0, 1.0)
    total = np.zeros(len(lengths))
    for weight, fraction in zip(weights, (0.0, 0.5, 1.0)):
        r = tip - (starts + fraction * chords)
        # (r_x, r_y, 0) x (0, 0, F) = F (r_y, -r_x, 0)
        moment = F_ext * np.column_stack([r[:, 1], -r[:, 0]])
        torsion = np.einsum("ij,ij->i", moment, tangents)
        bending = np.einsum("ij,ij->i", moment, normals)
        total += weight * (bending ** 2 * flexibility_b + torsion ** 2 * flexibility_t)

    delta = float(np.sum(lengths * total / 6.0)) / F_ext
    return F_ext / delta


def moment_decomposition_oracle(F_ext: float, arc: ArcGeometry, phi: float) -> Tuple[float, float]:
    """
    (M_bending, M_torsion) from the 3-D vector moment r x F.

    The arc is centred on the origin with the loaded tip at (R, 0, 0) and the section at
    (R cos phi, R sin phi, 0). The moment is projected on the section tangent pointing away from the
    tip (torsion) and on the normal pointing to the centre of curvature (bending).
    """
    if arc.is_straight:
        raise DomainError("the vector oracle needs a curved arc", field="alpha")
    if not (math.isfinite(phi) and 0.0 <= phi <= arc.alpha):
        raise DomainError(f"section angle must lie in [0, {arc.alpha}] rad, got {phi}", field="phi")

    R = arc.R
    load_point = np.array([R, 0.0, 0.0])
    section = np.array([R * math.cos(phi), R * math.sin(phi), 0.0])
    tangent = np.array([-math.sin(phi), math.cos(phi), 0.0])
    inward_normal = np.array([-math.cos(phi), -math.sin(phi), 0.0])
    moment = np.cross(load_point - section, np.array([0.0, 0.0, F_ext]))
    return float(moment @ inward_normal), float(moment @ tangent)
