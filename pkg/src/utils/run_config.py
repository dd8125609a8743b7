"""
Module: run_config.py
Description: Loads the JSON run configuration, applies command-line overrides and builds the model
             objects. Every invalid value is reported with the dotted path of its key.

Precedence, highest first: command-line flags, the JSON file, the built-in defaults.
"""

import copy
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from src.errors import ConfigurationError, DomainError, FileAccessError
from src.models.experiment_analysis import ModelSetup
from src.models.mechanics import ArcGeometry, BeamSection, BLSChain, Material
from src.models.verification import VerificationTolerances

logger = logging.getLogger(__name__)

DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    "material": {"E_MPa": 2000.0, "nu": 0.35},
    "section": {"h_mm": 10.0, "b_mm": 10.0},
    "geometry": {"C_mm": 100.0},
    "chain": {"L_mm": 100.0, "F_T_N": 10.0, "N_segments": 10},
    "tolerances": {
        "straight_limit": 1e-8,
        "closed_form": 1e-6,
        "castigliano": 1e-6,
        "discrete_chain": 1e-2,
        "moment": 1e-10,
    },
    "outputs": {"csv": None, "svg": None, "report": None},
}

_INTEGER_KEYS = {"chain.N_segments"}

# Model argument name -> config key, per model object.
_FIELD_PATHS = {
    "material": {"E": "material.E_MPa", "nu": "material.nu"},
    "section": {"h": "section.h_mm", "b": "section.b_mm"},
    "geometry": {"C": "geometry.C_mm"},
    "chain": {"h": "section.h_mm", "L": "chain.L_mm", "F_T": "chain.F_T_N", "N": "chain.N_segments"},
}


@dataclass(frozen=True)
class OutputPaths:
    csv: Optional[str] = None
    svg: Optional[str] = None
    report: Optional[str] = None


@dataclass(frozen=True)
class RunConfig:
    material: Material
    section: BeamSection
    geometry: ArcGeometry
    chain: BLSChain
    tolerances: VerificationTolerances
    outputs: OutputPaths

    @property
    def C(self) -> float:
        return self.geometry.C

    def model_setup(self) -> ModelSetup:
        return ModelSetup(material=self.material, section=self.section, C=self.geometry.C)


def _merge(target: Dict[str, Dict[str, Any]], source: Mapping[str, Any], origin: str) -> None:
    if not isinstance(source, Mapping):
        raise ConfigurationError(f"{origin} must be a JSON object", field_path="$")
    for section, values in source.items():
        if section not in DEFAULT_CONFIG:
            raise ConfigurationError(f"unknown section in {origin}", field_path=section)
        if not isinstance(values, Mapping):
            raise ConfigurationError("must be a JSON object", field_path=section)
        for key, value in values.items():
            if key not in DEFAULT_CONFIG[section]:
                raise ConfigurationError(f"unknown key in {origin}", field_path=f"{section}.{key}")
            target[section][key] = value


def _apply_overrides(target: Dict[str, Dict[str, Any]], overrides: Mapping[str, Any]) -> None:
    for path, value in overrides.items():
        if value is None:
            continue
        section, _, key = path.partition(".")
        if section not in DEFAULT_CONFIG or key not in DEFAULT_CONFIG[section]:
            raise ConfigurationError("unknown override", field_path=path)
        target[section][key] = value


def _number(values: Dict[str, Dict[str, Any]], path: str) -> float:
    section, key = path.split(".")
    value = values[section][key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"must be a number, got {value!r}", field_path=path)
    if path in _INTEGER_KEYS:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigurationError(f"must be an integer, got {value!r}", field_path=path)
        return int(value)
    if not math.isfinite(value):
        raise ConfigurationError(f"must be finite, got {value!r}", field_path=path)
    return float(value)


def _build(kind: str, factory, **kwargs):
    try:
        return factory(**kwargs)
    except DomainError as exc:
        path = _FIELD_PATHS[kind].get(exc.field, kind)
        message = str(exc).split(": ", 1)[1] if exc.field else str(exc)
        raise ConfigurationError(message, field_path=path) from exc


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a JSON configuration document.

    Parameters:
        path (str | Path): Location of the file.

    Returns:
        dict: The parsed document.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        logger.error(f"Cannot read config file {path}: {e}")
        raise FileAccessError(str(e.strerror or e), str(path)) from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}", field_path="$") from e


def load_run_config(
    path: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """
    Resolve the run configuration from defaults, an optional JSON file and dotted-path overrides.

    Parameters:
        path (str | Path, optional): JSON configuration file.
        overrides (Mapping[str, Any], optional): e.g. {"section.h_mm": 20}; None values are skipped.

    Returns:
        RunConfig: Validated model objects and output paths.
    """
    values = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        _merge(values, read_config_file(path), str(path))
        logger.info(f"Loaded run configuration from {path}")
    _apply_overrides(values, overrides or {})

    material = _build("material", Material, E=_number(values, "material.E_MPa"), nu=_number(values, "material.nu"))
    section = _build("section", BeamSection, h=_number(values, "section.h_mm"), b=_number(values, "section.b_mm"))
    geometry = _build("geometry", ArcGeometry, C=_number(values, "geometry.C_mm"), alpha=0.0)
    chain = _build(
        "chain",
        BLSChain,
        h=section.h,
        L=_number(values, "chain.L_mm"),
        F_T=_number(values, "chain.F_T_N"),
        N=_number(values, "chain.N_segments"),
    )

    limits = {}
    for key in DEFAULT_CONFIG["tolerances"]:
        limit = _number(values, f"tolerances.{key}")
        if not (limit > 0):
            raise ConfigurationError(f"must be positive, got {limit}", field_path=f"tolerances.{key}")
        limits[key] = limit

    outputs = {}
    for key, value in values["outputs"].items():
        if value is not None and not isinstance(value, str):
            raise ConfigurationError(f"must be a path string or null, got {value!r}", field_path=f"outputs.{key}")
        outputs[key] = value

    return RunConfig(
        material=material,
        section=section,
        geometry=geometry,
        chain=chain,
        tolerances=VerificationTolerances(**limits),
        outputs=OutputPaths(**outputs),
    )
