"""
Module: mechanics.py
Description: Closed-form lateral stiffness of the bone-like structure (BLS) treated as a curved
             cantilever of constant curvature, its granular-separation break condition and the
             constant-curvature backbone kinematics.

Units are N, mm, MPa (N/mm^2) and radians throughout. Degrees only appear at the CLI boundary.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Tuple, Union

import numpy as np

from src.errors import ConfigurationError, DomainError
from src.models.quantities import (
    Degree,
    Kilogram,
    MegaPascal,
    Millimetre,
    Newton,
    NewtonMillimetre,
    NewtonPerMillimetre,
    Radian,
)

logger = logging.getLogger(__name__)

FULL_TURN = 2.0 * math.pi
# Largest bending angle with measured data; anything above is reported as extrapolation.
TESTED_ANGLE_LIMIT = math.pi
# Below this the arc is treated as a straight beam (R is infinite).
STRAIGHT_ANGLE = 1e-12
# Below this A_bending and A_torsion are summed from their Maclaurin series.
SERIES_THRESHOLD = 0.5
STANDARD_GRAVITY = 9.80665
_SERIES_TERMS = 14


def _series_coefficients() -> Tuple[np.ndarray, np.ndarray]:
    """
    Coefficients (in powers of alpha^2) of the Maclaurin series of A_bending and A_torsion.

    With s(x) = x - sin(x):
        A_bending = s(2a) / a^3             = 4/3 - 4a^2/15 + 8a^4/315 - ...
        A_torsion = (8 s(a) - s(2a)) / a^3  = a^2/5 - a^4/42 + ...
    """
    bending = []
    torsion = []
    for k in range(1, _SERIES_TERMS + 1):
        sign = (-1.0) ** (k + 1)
        denominator = math.factorial(2 * k + 1)
        bending.append(sign * 2.0 ** (2 * k + 1) / denominator)
        torsion.append(sign * (8.0 - 2.0 ** (2 * k + 1)) / denominator)
    return np.array(bending), np.array(torsion)


_BENDING_SERIES, _TORSION_SERIES = _series_coefficients()


@dataclass(frozen=True)
class Material:
    """Isotropic elastic constants of the rigid chain material."""

    E: MegaPascal
    nu: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.E) and self.E > 0):
            raise DomainError(f"Young's modulus must be positive, got {self.E}", field="E")
        _check_poisson(self.nu)

    @property
    def G(self) -> MegaPascal:
        return shear_modulus(self.E, self.nu)


@dataclass(frozen=True)
class BeamSection:
    """Rectangular cross-section of the equivalent beam. h is the height, b the width."""

    h: Millimetre
    b: Millimetre

    def __post_init__(self) -> None:
        for name in ("h", "b"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"section dimension must be positive, got {value}", field=name)

    @property
    def I(self) -> float:  # noqa: E743
        return self.h * self.b ** 3 / 12.0

    @property
    def aspect_ratio(self) -> float:
        return self.h / self.b

    @property
    def I_p(self) -> float:
        return self.I * (1.0 + self.aspect_ratio ** 2)


@dataclass(frozen=True)
class ArcGeometry:
    """
    Constant-curvature state of the actuator/BLS backbone.

    alpha == 0 is a valid straight state; R is then infinite.
    """

    C: Millimetre
    alpha: Radian

    def __post_init__(self) -> None:
        if not (math.isfinite(self.C) and self.C > 0):
            raise DomainError(f"arc length must be positive, got {self.C}", field="C")
        _check_angle(self.alpha)

    @property
    def is_straight(self) -> bool:
        return self.alpha < STRAIGHT_ANGLE

    @property
    def R(self) -> Millimetre:
        if self.is_straight:
            return math.inf
        return self.C / self.alpha


@dataclass(frozen=True)
class BLSChain:
    """Chain-level parameters used by the break condition."""

    h: Millimetre
    L: Millimetre
    F_T: Newton
    N: int = 1

    def __post_init__(self) -> None:
        if not (math.isfinite(self.h) and self.h > 0):
            raise DomainError(f"chain height must be positive, got {self.h}", field="h")
        if not (math.isfinite(self.L) and self.L > 0):
            raise DomainError(f"chain length must be positive, got {self.L}", field="L")
        if not (math.isfinite(self.F_T) and self.F_T >= 0):
            raise DomainError(f"rope tension must be non-negative, got {self.F_T}", field="F_T")
        if isinstance(self.N, bool) or not isinstance(self.N, int) or self.N < 1:
            raise DomainError(f"segment count must be a positive integer, got {self.N!r}", field="N")
        if self.L < self.h:
            raise DomainError(f"chain length {self.L} is shorter than its height {self.h}", field="L")

    @property
    def break_force(self) -> Newton:
        return self.F_T * self.h / self.L


@dataclass(frozen=True)
class EvaluationBreakdown:
    alpha: Radian
    A_bending: float
    A_torsion: float
    F_alpha: float
    nu: float
    aspect_ratio: float


@dataclass(frozen=True)
class StiffnessResult:
    k: NewtonPerMillimetre
    F_alpha: float
    break_force: Newton
    breakdown: EvaluationBreakdown
    extrapolated: bool = False


@dataclass(frozen=True)
class Backbone:
    """Sampled centre line of the bent actuator, base at the origin with +x initial tangent."""

    arc_length: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)
    tip: Tuple[Millimetre, Millimetre]
    tip_heading: Radian


def _check_poisson(nu: float) -> None:
    if not (math.isfinite(nu) and 0.0 <= nu < 0.5):
        raise DomainError(f"Poisson's ratio must lie in [0, 0.5), got {nu}", field="nu")


def _check_angle(alpha: float, name: str = "alpha") -> None:
    if not (math.isfinite(alpha) and 0.0 <= alpha <= FULL_TURN):
        raise DomainError(f"bending angle must lie in [0, 2*pi] rad, got {alpha}", field=name)


def section_properties(h: Millimetre, b: Millimetre) -> BeamSection:
    """Build a rectangular section; I, aspect ratio and I_p are derived on access."""
    return BeamSection(h=h, b=b)


def shear_modulus(E: MegaPascal, nu: float) -> MegaPascal:
    if not (math.isfinite(E) and E > 0):
        raise DomainError(f"Young's modulus must be positive, got {E}", field="E")
    _check_poisson(nu)
    return E / (2.0 * (1.0 + nu))


def arc_from_angle(C: Millimetre, alpha: Radian) -> ArcGeometry:
    return ArcGeometry(C=C, alpha=alpha)


def degrees_to_radians(angle: Degree) -> Radian:
    return math.radians(angle)


def radians_to_degrees(angle: Radian) -> Degree:
    return math.degrees(angle)


def rope_tension_from_weight(weight_kg: Kilogram, g: float = STANDARD_GRAVITY) -> Newton:
    """
    Rope pre-tension produced by a weight hanging on the rope through a pulley.

    Parameters:
        weight_kg (float): Hanging mass in kg.
        g (float): Gravitational acceleration in m/s^2.

    Returns:
        float: Tension in N.
    """
    if not (math.isfinite(weight_kg) and weight_kg >= 0):
        raise DomainError(f"weight must be non-negative, got {weight_kg}", field="weight_kg")
    return weight_kg * g


def backbone_and_tip(arc: ArcGeometry, n_samples: int) -> Backbone:
    """
    Sample the constant-curvature backbone.

    The base sits at the origin with its tangent along +x and the actuator bends toward +y, so the
    tip lands at (R sin(alpha), R (1 - cos(alpha))). A straight arc yields points on the +x axis.

    Parameters:
        arc (ArcGeometry): Backbone state.
        n_samples (int): Number of points, base and tip included.

    Returns:
        Backbone: Arc-length stations, (n, 2) point array, tip position and tip heading.
    """
    if isinstance(n_samples, bool) or not isinstance(n_samples, (int, np.integer)) or n_samples < 2:
        raise DomainError(f"at least 2 samples are required, got {n_samples!r}", field="n_samples")

    s = np.linspace(0.0, arc.C, int(n_samples))
    if arc.is_straight:
        points = np.column_stack([s, np.zeros_like(s)])
    else:
        theta = s / arc.R
        # 2 R sin^2(theta/2) instead of R (1 - cos theta) keeps gentle bends accurate.
        points = np.column_stack([arc.R * np.sin(theta), 2.0 * arc.R * np.sin(theta / 2.0) ** 2])
    tip = (float(points[-1, 0]), float(points[-1, 1]))
    return Backbone(arc_length=s, points=points, tip=tip, tip_heading=arc.alpha)


def internal_moments(
    F_ext: Newton, arc: ArcGeometry, phi: Union[float, np.ndarray]
) -> Tuple[Union[NewtonMillimetre, np.ndarray], Union[NewtonMillimetre, np.ndarray]]:
    """
    Bending and torsion moments at the section phi radians (along the arc) from the loaded tip,
    for a tip load perpendicular to the plane of the arc.

        M_bending = F R sin(phi)
        M_torsion = F R (1 - cos(phi))

    phi may be a scalar or a numpy array; the return type follows it.
    """
    if arc.is_straight:
        raise DomainError("moments along a straight arc are not defined by angle; use arc length", field="alpha")
    phi_values = np.asarray(phi, dtype=float)
    if np.any(~np.isfinite(phi_values)) or np.any(phi_values < 0.0) or np.any(phi_values > arc.alpha):
        raise DomainError(f"section angle must lie in [0, {arc.alpha}] rad", field="phi")

    lever = F_ext * arc.R
    bending = lever * np.sin(phi_values)
    torsion = 2.0 * lever * np.sin(phi_values / 2.0) ** 2
    if phi_values.ndim == 0:
        return float(bending), float(torsion)
    return bending, torsion


def _shape_functions(alphas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """A_bending and A_torsion for an array of angles, switching to the series near zero."""
    bending = np.empty_like(alphas)
    torsion = np.empty_like(alphas)

    small = alphas < SERIES_THRESHOLD
    if np.any(small):
        a2 = alphas[small] ** 2
        bending[small] = np.polynomial.polynomial.polyval(a2, _BENDING_SERIES)
        torsion[small] = np.polynomial.polynomial.polyval(a2, _TORSION_SERIES)

    large = ~small
    if np.any(large):
        a = alphas[large]
        sin_a = np.sin(a)
        cos_a = np.cos(a)
        cube = a ** 3
        bending[large] = 2.0 * (a - sin_a * cos_a) / cube
        torsion[large] = (6.0 * a - 8.0 * sin_a + 2.0 * sin_a * cos_a) / cube
    return bending, torsion


def evaluation_grid(alphas, nu: float, aspect_ratio: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Vectorised evaluation function over an array of bending angles.

    Returns:
        Tuple[np.ndarray, np.ndarray, np.ndarray]: (A_bending, A_torsion, F_alpha), equal to rounding
        to calling evaluation_function angle by angle.
    """
    alpha_values = np.atleast_1d(np.asarray(alphas, dtype=float))
    bad = ~np.isfinite(alpha_values) | (alpha_values < 0.0) | (alpha_values > FULL_TURN)
    if np.any(bad):
        raise DomainError(
            f"bending angle must lie in [0, 2*pi] rad, got {alpha_values[bad][0]}", field="alpha"
        )
    _check_poisson(nu)
    if not (math.isfinite(aspect_ratio) and aspect_ratio > 0):
        raise DomainError(f"aspect ratio must be positive, got {aspect_ratio}", field="lambda")

    bending, torsion = _shape_functions(alpha_values)
    torsion_weight = 2.0 * (1.0 + nu) / (1.0 + aspect_ratio ** 2)
    return bending, torsion, 1.0 / (bending + torsion_weight * torsion)


def evaluation_function(alpha: Radian, nu: float, aspect_ratio: float) -> EvaluationBreakdown:
    """
    Dimensionless evaluation function F(alpha) = 1 / [A_bending + 2(1+nu) A_torsion / (1+lambda^2)].

    Only (alpha, nu, lambda) enter; the material stiffness and the geometry scale are carried by
    the 4EI/C^3 prefactor of the stiffness.
    """
    _check_angle(alpha)
    bending, torsion, f_alpha = evaluation_grid([alpha], nu, aspect_ratio)
    return EvaluationBreakdown(
        alpha=alpha,
        A_bending=float(bending[0]),
        A_torsion=float(torsion[0]),
        F_alpha=float(f_alpha[0]),
        nu=nu,
        aspect_ratio=aspect_ratio,
    )


Evaluator = Callable[[float, float, float], EvaluationBreakdown]


def stiffness_prefactor(mat: Material, sec: BeamSection, C: Millimetre) -> float:
    """4EI/C^3, the stiffness scale of the curved cantilever."""
    return 4.0 * mat.E * sec.I / C ** 3


def closed_form_stiffness(
    mat: Material, sec: BeamSection, arc: ArcGeometry, evaluate: Evaluator = evaluation_function
) -> NewtonPerMillimetre:
    breakdown = evaluate(arc.alpha, mat.nu, sec.aspect_ratio)
    return stiffness_prefactor(mat, sec, arc.C) * breakdown.F_alpha


def lateral_stiffness(mat: Material, sec: BeamSection, arc: ArcGeometry, chain: BLSChain) -> StiffnessResult:
    """
    Lateral stiffness k = (4EI/C^3) F(alpha) of the BLS together with its break force F_T h / L.

    Parameters:
        mat (Material): Chain material.
        sec (BeamSection): Equivalent beam section.
        arc (ArcGeometry): Current bending state.
        chain (BLSChain): Chain parameters; chain.h must equal sec.h.

    Returns:
        StiffnessResult: Stiffness, evaluation breakdown and break force.
    """
    if abs(chain.h - sec.h) > 1e-9 * max(abs(chain.h), abs(sec.h)):
        raise ConfigurationError(
            f"chain height {chain.h} mm does not match section height {sec.h} mm", field_path="chain.h"
        )

    breakdown = evaluation_function(arc.alpha, mat.nu, sec.aspect_ratio)
    k = stiffness_prefactor(mat, sec, arc.C) * breakdown.F_alpha
    extrapolated = arc.alpha > TESTED_ANGLE_LIMIT
    if extrapolated:
        logger.warning(f"Bending angle {arc.alpha:.6g} rad is beyond the tested range (pi rad); extrapolating")
    return StiffnessResult(
        k=k,
        F_alpha=breakdown.F_alpha,
        break_force=chain.break_force,
        breakdown=breakdown,
        extrapolated=extrapolated,
    )


def break_check(F_applied: Newton, chain: BLSChain) -> bool:
    """True when the applied lateral force separates the chain segments (F > F_T h / L)."""
    if not (math.isfinite(F_applied) and F_applied >= 0):
        raise DomainError(f"applied force must be non-negative, got {F_applied}", field="F_applied")
    return F_applied > chain.break_force
