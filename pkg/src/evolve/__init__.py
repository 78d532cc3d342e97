"""
Интегратор уравнения u_tt = u_rr + (2/r) u_r + u^p и начальные данные.
"""

from .initial_data import (
    custom_table_data,
    gauss4_data,
    homogeneous_data,
    mode_perturbed_static_data,
    selfsim_snapshot,
)
from .diagnostics import energy_drift, march, scaling_commutator, self_convergence_order
from .integrator import EvolutionOutcome, GrowthRate, Verdict, evolve, growth_rate_fit
from .operator import spatial_operator, step, time_derivative

__all__ = [
    "custom_table_data",
    "gauss4_data",
    "homogeneous_data",
    "mode_perturbed_static_data",
    "selfsim_snapshot",
    "energy_drift",
    "march",
    "scaling_commutator",
    "self_convergence_order",
    "EvolutionOutcome",
    "GrowthRate",
    "Verdict",
    "evolve",
    "growth_rate_fit",
    "spatial_operator",
    "step",
    "time_derivative",
]
