"""
Линейная устойчивость: замкнутый спектр около U_0, численный спектр около U_n,
связанное состояние статического решения p = 5.
"""

from .modes import (
    Branch,
    EigenMode,
    EigenPair,
    recurrence_ratio,
    u0_eigenfunction,
    u0_spectrum,
    u0_truncation_residual,
)
from .qep import QuadraticEigenproblem, qep_spectrum
from .static import (
    StaticSolutionReport,
    potential,
    static_bound_state,
    static_residual,
    static_solution,
    static_solution_family,
    zero_mode,
    zero_mode_residual,
)

__all__ = [
    "Branch",
    "EigenMode",
    "EigenPair",
    "recurrence_ratio",
    "u0_eigenfunction",
    "u0_spectrum",
    "u0_truncation_residual",
    "QuadraticEigenproblem",
    "qep_spectrum",
    "StaticSolutionReport",
    "potential",
    "static_bound_state",
    "static_residual",
    "static_solution",
    "static_solution_family",
    "zero_mode",
    "zero_mode_residual",
]
