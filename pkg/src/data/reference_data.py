# src/data/reference_data.py
"""
Published reference values for the BTSA: the fingertip (blocked) force comparison against
other soft actuators and the measured stiffness endpoints the analysis pipeline is checked against.
"""

from typing import Dict, List, Tuple

BTSA_FINGERTIP_FORCE_N = 7.83
BTSA_FINGERTIP_PRESSURE_KPA = 65.0

# (label, blocked force N, driving pressure kPa)
FINGERTIP_COMPARISON: List[Tuple[str, float, float]] = [
    ("Abondance 2020", 2.3, 138.0),
    ("Zhang 2022", 1.2, 35.0),
    ("Chen 2017", 4.0, 165.0),
    ("Low 2020", 2.8, 350.0),
    ("Park 2018", 1.9, 80.0),
    ("BTSA", round(BTSA_FINGERTIP_FORCE_N, 1), BTSA_FINGERTIP_PRESSURE_KPA),
]

PEAK_BENDING_STIFFNESS = 0.70
MIN_BENDING_STIFFNESS = 0.20
BENDING_MODULATION = 3.5

# Lateral stiffness gain of the BLS at the heaviest rope weight, keyed by bending angle in degrees.
LATERAL_ENHANCEMENT: Dict[float, float] = {0.0: 4.2, 45.0: 3.5, 90.0: 2.2}
# Lateral stiffness range over rope weights (0 to 2 kg) with the BLS attached.
WEIGHT_MODULATION: Dict[float, float] = {0.0: 1.5, 45.0: 1.2, 90.0: 1.2}


def fingertip_rows() -> List[Tuple[str, float, float]]:
    return list(FINGERTIP_COMPARISON)
