"""
Функционал энергии.
"""
import numpy as np
from scipy.integrate import simpson

from .constants import ModelConstants
from .grid import FieldState
from .stencils import first_derivative


def energy_density(state: FieldState, consts: ModelConstants) -> np.ndarray:
    """Плотность 1/2 v^2 + 1/2 u_r^2 - u^{p+1}/(p+1) в узлах"""
    p = consts.p
    u_r = first_derivative(state.u, state.grid.h)
    return 0.5 * state.v ** 2 + 0.5 * u_r ** 2 - state.u ** (p + 1) / (p + 1)


def energy(state: FieldState, consts: ModelConstants) -> float:
    """
    Энергия 4*pi * int_0^{r_max} e(r) r^2 dr.

    Интеграл по составной формуле Симпсона, u_r теми же шаблонами 4-го порядка,
    что и в эволюции.

    Args:
        state: Состояние поля
        consts: Константы модели

    Returns:
        Значение энергии
    """
    r = state.grid.nodes
    integrand = energy_density(state, consts) * r ** 2
    return float(4.0 * np.pi * simpson(integrand, x=r))
