"""
Module: quantities.py
Description: Unit-tagged float aliases used in signatures across the models.
"""

from typing import NewType

Millimetre = NewType("Millimetre", float)
Radian = NewType("Radian", float)
Degree = NewType("Degree", float)
Newton = NewType("Newton", float)
NewtonMillimetre = NewType("NewtonMillimetre", float)
NewtonPerMillimetre = NewType("NewtonPerMillimetre", float)
MegaPascal = NewType("MegaPascal", float)
KiloPascal = NewType("KiloPascal", float)
Kilogram = NewType("Kilogram", float)
