"""
Общий словарь лаборатории: константы, сетки, состояния, энергия, масштабирование.
"""

from .constants import Criticality, ModelConstants, derive_constants, homogeneous_solution
from .energy import energy, energy_density
from .grid import FieldState, RadialGrid
from .scaling import rescale_solution

__all__ = [
    "Criticality",
    "ModelConstants",
    "derive_constants",
    "homogeneous_solution",
    "energy",
    "energy_density",
    "FieldState",
    "RadialGrid",
    "rescale_solution",
]
