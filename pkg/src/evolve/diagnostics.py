"""
Качество эволюции: дрейф энергии, самосходимость, масштабная ковариантность шага.
"""
from typing import Callable, List

import numpy as np

from ..core.constants import ModelConstants
from ..core.errors import InvalidState, NumericalError
from ..core.grid import FieldState, RadialGrid
from ..core.scaling import rescale_solution
from ..utils.logger import get_structured_logger
from .integrator import EvolutionOutcome
from .operator import step

logger = get_structured_logger("evolve.diagnostics")

DataBuilder = Callable[[RadialGrid], FieldState]


def energy_drift(outcome: EvolutionOutcome, amplitude_cap: float = 1e3) -> float:
    """max |E(t) - E(0)| / max(1, |E(0)|) по точкам трассы с max|u| <= amplitude_cap"""
    E = outcome.energy_trace[:, 1]
    calm = outcome.u_max <= amplitude_cap
    E0 = float(E[0])
    return float(np.max(np.abs(E[calm] - E0)) / max(1.0, abs(E0)))


def march(state: FieldState, t_end: float, dt_max: float, consts: ModelConstants,
          boundary: str = "isolated") -> FieldState:
    """
    Равные шаги RK4 от state.t до t_end с dt <= dt_max.

    Raises:
        InvalidState: t_end раньше state.t
    """
    span = t_end - state.t
    if span < 0.0:
        raise InvalidState(f"t_end={t_end} раньше t={state.t}", {"t": state.t, "t_end": t_end})
    steps = max(1, int(np.ceil(span / dt_max - 1e-9)))
    dt = span / steps
    for _ in range(steps):
        state = step(state, dt, consts, boundary)
    return state


def self_convergence_order(build: DataBuilder, r_max: float, N: int, t_end: float,
                           consts: ModelConstants, cfl: float = 0.25, refine_space: bool = True,
                           boundary: str = "isolated") -> float:
    """
    Порядок самосходимости по трем уровням разрешения.

    При refine_space сетка N, 2N, 4N и dt = cfl*h на каждой; иначе сетка N
    фиксирована и делится только dt. Разности берутся в узлах грубой сетки:
    order = log2(|u_1 - u_2| / |u_2 - u_3|).

    Raises:
        NumericalError: Разности на тонких уровнях обнулились
    """
    finals: List[np.ndarray] = []
    coarse_h = r_max / N
    for level in range(3):
        factor = 2 ** level
        grid = RadialGrid(r_max=r_max, N=N * factor if refine_space else N)
        final = march(build(grid), t_end, cfl * coarse_h / factor, consts, boundary)
        finals.append(final.u[::factor] if refine_space else final.u)
    coarse = float(np.max(np.abs(finals[0] - finals[1])))
    fine = float(np.max(np.abs(finals[1] - finals[2])))
    if fine == 0.0 or coarse == 0.0:
        raise NumericalError("Разности уровней равны нулю, порядок не определен",
                             {"coarse": coarse, "fine": fine})
    order = float(np.log2(coarse / fine))
    logger.debug("Self-convergence", order=order, coarse=coarse, fine=fine, refine_space=refine_space)
    return order


def scaling_commutator(state: FieldState, L: float, dt: float, consts: ModelConstants,
                       boundary: str = "isolated") -> float:
    """
    Относительное расхождение step(rescale(s, L), L*dt) и rescale(step(s, dt), L).

    На сетке r_max' = L*r_max схема переходит в себя при масштабировании,
    поэтому расхождение определяется только округлением.
    """
    scaled_then_stepped = step(rescale_solution(state, L, consts), L * dt, consts, boundary)
    stepped_then_scaled = rescale_solution(step(state, dt, consts, boundary), L, consts)
    diff = max(float(np.max(np.abs(scaled_then_stepped.u - stepped_then_scaled.u))),
               float(np.max(np.abs(scaled_then_stepped.v - stepped_then_scaled.v))))
    scale = max(1.0, stepped_then_scaled.max_abs_u, float(np.max(np.abs(stepped_then_scaled.v))))
    return diff / scale
