"""
Метод прямых для u_tt = u_rr + (2/r) u_r + u^p.
"""
from typing import Tuple

import numpy as np

from ..core.constants import ModelConstants
from ..core.errors import InvalidState, NonFiniteDetected
from ..core.grid import FieldState
from ..core.stencils import first_derivative, radial_laplacian

BOUNDARIES = ("isolated", "sommerfeld")


def _operator(u: np.ndarray, h: float, p: int) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        return radial_laplacian(u, h) + u ** p


def spatial_operator(state: FieldState, consts: ModelConstants) -> np.ndarray:
    """
    u_rr + (2/r) u_r + u^p во всех узлах.

    В r = 0 используется четное продолжение и предельная форма 3 u_rr(0).
    Граничное условие применяется к производным по времени (time_derivative).
    """
    return _operator(state.u, state.grid.h, consts.p)


def time_derivative(u: np.ndarray, v: np.ndarray, h: float, p: int,
                    boundary: str = "isolated") -> Tuple[np.ndarray, np.ndarray]:
    """
    Правая часть системы u_t = v, v_t = L u + u^p.

    isolated: два последних узла заморожены (область причинно отделена от диагностики).
    sommerfeld: в последнем узле уходящая волна, v_t = -(v_r + v/r).
    """
    du = v.copy()
    dv = _operator(u, h, p)
    if boundary == "isolated":
        du[-2:] = 0.0
        dv[-2:] = 0.0
    elif boundary == "sommerfeld":
        r_end = h * (u.size - 1)
        dv[-1] = -(first_derivative(v, h)[-1] + v[-1] / r_end)
    else:
        raise InvalidState(f"Неизвестное граничное условие: {boundary}", {"valid": BOUNDARIES})
    return du, dv


def rk4_arrays(u: np.ndarray, v: np.ndarray, dt: float, h: float, p: int,
               boundary: str = "isolated") -> Tuple[np.ndarray, np.ndarray]:
    """Классический шаг Рунге-Кутты 4-го порядка на массивах"""
    k1u, k1v = time_derivative(u, v, h, p, boundary)
    k2u, k2v = time_derivative(u + 0.5 * dt * k1u, v + 0.5 * dt * k1v, h, p, boundary)
    k3u, k3v = time_derivative(u + 0.5 * dt * k2u, v + 0.5 * dt * k2v, h, p, boundary)
    k4u, k4v = time_derivative(u + dt * k3u, v + dt * k3v, h, p, boundary)
    with np.errstate(over="ignore", invalid="ignore"):
        u_new = u + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v_new = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return u_new, v_new


def step(state: FieldState, dt: float, consts: ModelConstants, boundary: str = "isolated") -> FieldState:
    """
    Один шаг RK4.

    Raises:
        InvalidState: dt не положителен или больше шага сетки
        NonFiniteDetected: Нечисловые значения после шага (прохождение разрушения)
    """
    h = state.grid.h
    if not 0.0 < dt <= h:
        raise InvalidState(f"Шаг dt={dt} должен лежать в (0, h={h}]", {"dt": dt, "h": h})
    u, v = rk4_arrays(state.u, state.v, dt, h, consts.p, boundary)
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise NonFiniteDetected("Нечисловые значения после шага", {"t": state.t, "dt": dt})
    return FieldState(grid=state.grid, t=state.t + dt, u=u, v=v)
