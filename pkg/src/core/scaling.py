"""
Симметрия масштабирования u_L(t, r) = L^{-alpha} u(t/L, r/L).
"""
from typing import Optional

import numpy as np

from .constants import ModelConstants
from .errors import ConfigurationError, RhoBeyondGrid
from .grid import FieldState, RadialGrid
from .stencils import even_spline


def rescale_solution(
    state: FieldState,
    L: float,
    consts: ModelConstants,
    grid: Optional[RadialGrid] = None,
) -> FieldState:
    """
    Масштабированное состояние.

    Амплитуда умножается на L^{-2/(p-1)}, скорость на L^{-2/(p-1)-1}, время на L.
    Без явной сетки берется r_max' = L*r_max с тем же N: узлы r'_j/L совпадают со
    старыми узлами и интерполяция не нужна.

    Args:
        state: Исходное состояние
        L: Масштаб (L > 0)
        consts: Константы модели
        grid: Целевая сетка (необязательно)

    Returns:
        FieldState на новой сетке

    Raises:
        ConfigurationError: Если L <= 0
        RhoBeyondGrid: Если целевая сетка выходит за пределы исходной
    """
    if not np.isfinite(L) or L <= 0:
        raise ConfigurationError(f"Масштаб L должен быть положительным, получено {L}",
                                 {"L": L, "valid": "> 0"})

    amp = L ** (-consts.alpha_f)
    if grid is None:
        new_grid = state.grid.scaled(L)
        u_src, v_src = state.u, state.v
    else:
        new_grid = grid
        source_r = new_grid.nodes / L
        if source_r[-1] > state.grid.r_max * (1.0 + 1e-12):
            raise RhoBeyondGrid(
                "Целевая сетка выходит за пределы исходной",
                {"required": float(source_r[-1]), "available": state.grid.r_max},
            )
        nodes = state.grid.nodes
        u_src = even_spline(nodes, state.u)(source_r)
        v_src = even_spline(nodes, state.v)(source_r)

    return FieldState(
        grid=new_grid,
        t=L * state.t,
        u=amp * np.asarray(u_src),
        v=amp / L * np.asarray(v_src),
    )
