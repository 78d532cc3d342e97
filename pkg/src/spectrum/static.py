"""
Статическое решение p = 5 и спектр его линеаризации.

u_S(r) = (1 + r^2/3)^{-1/2}. Возмущения e^{lambda t} v(r) удовлетворяют
-v'' - (2/r) v' + V v = k^2 v с V = -5 u_S^4 и k^2 = -lambda^2.
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from ..config.lab_config import BoundStateControls
from ..core.errors import Ambiguous, NoBoundState
from ..profiles.shooting import count_sign_changes
from ..utils.logger import get_structured_logger

logger = get_structured_logger("spectrum.static")


def _w(r):
    r = np.asarray(r, dtype=float)
    return 1.0 + r * r / 3.0


def _laplacian_of_power(r, m: float):
    """Радиальный лапласиан w^m, w = 1 + r^2/3"""
    w = _w(r)
    return w ** (m - 2.0) * (4.0 / 3.0 * m * (m - 1.0) * (w - 1.0) + 2.0 * m * w)


def static_solution(r):
    """u_S(r) = (1 + r^2/3)^{-1/2}"""
    return _w(r) ** -0.5


def static_solution_derivative(r):
    r = np.asarray(r, dtype=float)
    return -r / 3.0 * _w(r) ** -1.5


def static_solution_family(L: float, r):
    """Орбита масштабирования u_S^L(r) = L^{-1/2} u_S(r/L)"""
    if L <= 0:
        raise ValueError(f"L должен быть положительным, получено {L}")
    return L ** -0.5 * static_solution(np.asarray(r, dtype=float) / L)


def zero_mode(r):
    """Нулевая мода v_0 = (1/2 - r^2/6)/(1 + r^2/3)^{3/2} = d/dL u_S^L при L = 1 с обратным знаком"""
    r = np.asarray(r, dtype=float)
    return (0.5 - r * r / 6.0) * _w(r) ** -1.5


def potential(r):
    """V(r) = -5/(1 + r^2/3)^2"""
    return -5.0 * _w(r) ** -2.0


def static_residual(r):
    """u'' + (2/r)u' + u^5 для u_S"""
    return _laplacian_of_power(r, -0.5) + static_solution(r) ** 5


def zero_mode_residual(r):
    """-v_0'' - (2/r) v_0' + V v_0 при k^2 = 0"""
    laplacian = _laplacian_of_power(r, -1.5) - 0.5 * _laplacian_of_power(r, -0.5)
    return -laplacian + potential(r) * zero_mode(r)


@dataclass(frozen=True)
class StaticSolutionReport:
    """
    Результат задачи о связанном состоянии.

    Attributes:
        lambda1: Скорость роста единственной неустойчивой моды
        k2: Собственное значение Шредингера k^2 = -lambda1^2
        r, v1: Собственная функция, v1(0) = 1
        zero_mode_residual: Максимум невязки нулевой моды на сетке r
        bound_states: Число найденных связанных состояний
        nodes: Число внутренних нулей v1
    """
    lambda1: float
    k2: float
    r: np.ndarray = field(repr=False)
    v1: np.ndarray = field(repr=False)
    zero_mode_residual: float
    bound_states: int = 1
    nodes: int = 0

    def eigenfunction(self, r) -> np.ndarray:
        """v1 в произвольных точках; за r_match хвост e^{-kappa r}/r"""
        r = np.asarray(r, dtype=float)
        kappa = self.lambda1
        r_end = self.r[-1]
        values = np.interp(r, self.r, self.v1)
        beyond = r > r_end
        if np.any(beyond):
            values = np.where(beyond, self.v1[-1] * r_end * np.exp(-kappa * (r - r_end)) / np.maximum(r, r_end), values)
        return values

    def to_table(self) -> str:
        lines = [f"# lambda1={self.lambda1:.17g} k2={self.k2:.17g}"]
        lines.extend(f"{r:.17g} {v:.17g}" for r, v in zip(self.r, self.v1))
        return "\n".join(lines) + "\n"


def _schrodinger_system(k2: float):
    def rhs(r, y):
        v, vp = y
        return [vp, -2.0 * vp / r + (potential(r) - k2) * v]

    return rhs


def _regular_start(k2: float, r0: float) -> Tuple[float, float]:
    c = (-5.0 - k2) / 6.0
    return 1.0 + c * r0 * r0, 2.0 * c * r0


class BoundStateSolver:
    """Стрельба по k^2 для связанного состояния"""

    def __init__(self, controls: Optional[BoundStateControls] = None):
        self.controls = controls or BoundStateControls()

    def outward(self, k2: float, r_end: float, dense: bool = False):
        ctl = self.controls
        return solve_ivp(_schrodinger_system(k2), (ctl.r_start, r_end), _regular_start(k2, ctl.r_start),
                         method="DOP853", rtol=ctl.rtol, atol=ctl.atol, dense_output=dense)

    def inward(self, k2: float, r_end: float, dense: bool = False):
        """Затухающий хвост e^{-kappa r}/r от r_match внутрь"""
        ctl = self.controls
        kappa = np.sqrt(-k2)
        r = ctl.r_match
        v = np.exp(-kappa * (r - r_end)) / r
        vp = -(kappa + 1.0 / r) * v
        return solve_ivp(_schrodinger_system(k2), (r, r_end), [v, vp],
                         method="DOP853", rtol=ctl.rtol, atol=ctl.atol, dense_output=dense)

    def mismatch(self, k2: float) -> float:
        """Логарифмическая невязка с хвостом на r_match"""
        ctl = self.controls
        sol = self.outward(k2, ctl.r_match)
        v, vp = sol.y[:, -1]
        kappa = np.sqrt(-k2)
        return float((vp + (kappa + 1.0 / ctl.r_match) * v) / np.hypot(v, vp))

    def roots(self) -> list:
        ctl = self.controls
        grid = np.linspace(-5.0, ctl.k2_upper, ctl.k2_scan_points + 1)[1:]
        values = np.array([self.mismatch(k2) for k2 in grid])
        found = []
        for i in range(grid.size - 1):
            if values[i] * values[i + 1] < 0.0:
                logger.log_shooting_bracket(lo=float(grid[i]), hi=float(grid[i + 1]))
                found.append(brentq(self.mismatch, grid[i], grid[i + 1], xtol=ctl.root_tol, rtol=4e-16))
        return found

    def eigenfunction(self, k2: float) -> Tuple[np.ndarray, np.ndarray]:
        """Склейка внешнего и внутреннего решений на join_radius, v(0) = 1"""
        ctl = self.controls
        join = min(ctl.join_radius, 0.5 * ctl.r_match)
        left = self.outward(k2, join, dense=True)
        right = self.inward(k2, join, dense=True)
        v_left = left.y[0, -1]
        v_right = right.y[0, -1]
        scale = v_left / v_right

        r = np.arange(0.0, ctl.r_match + 0.5 * ctl.sample_spacing, ctl.sample_spacing)
        r[-1] = min(r[-1], ctl.r_match)
        v = np.empty_like(r)
        c = (-5.0 - k2) / 6.0
        center = r < ctl.r_start
        v[center] = 1.0 + c * r[center] ** 2
        inner = (~center) & (r <= join)
        v[inner] = left.sol(r[inner])[0]
        outer = r > join
        v[outer] = scale * right.sol(r[outer])[0]
        return r, v


def static_bound_state(controls: Optional[BoundStateControls] = None) -> StaticSolutionReport:
    """
    Связанное состояние с k^2 < 0 для потенциала V = -5/(1 + r^2/3)^2.

    Raises:
        NoBoundState: В окне k^2 нет корня
        Ambiguous: Найдено больше одного связанного состояния
    """
    solver = BoundStateSolver(controls)
    roots = solver.roots()
    if not roots:
        raise NoBoundState("Связанное состояние не найдено в окне k^2",
                           {"window": (-5.0, solver.controls.k2_upper)})
    if len(roots) > 1:
        raise Ambiguous("Найдено несколько связанных состояний", {"k2": roots})

    k2 = float(roots[0])
    lambda1 = float(np.sqrt(-k2))
    logger.log_root_found(kind="bound_state", value=k2, lambda1=lambda1)
    r, v1 = solver.eigenfunction(k2)
    return StaticSolutionReport(
        lambda1=lambda1,
        k2=k2,
        r=r,
        v1=v1,
        zero_mode_residual=float(np.max(np.abs(zero_mode_residual(r)))),
        bound_states=len(roots),
        nodes=count_sign_changes(v1[1:-1], 1e-12),
    )
