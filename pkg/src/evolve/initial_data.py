"""
Семейства начальных данных.
"""
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..core.constants import ModelConstants, homogeneous_solution
from ..core.errors import ConfigurationError, InvalidState
from ..core.grid import FieldState, RadialGrid
from ..profiles.exterior import ExteriorBehavior, ProfileEvaluator, continue_exterior
from ..profiles.shooting import SimilarityProfile
from ..spectrum.static import StaticSolutionReport, static_solution


def gauss4_data(A: float, sigma: float, R: float, grid: RadialGrid) -> FieldState:
    """u(0,r) = A r^2 exp[-((r-R)/sigma)^4], u_t(0,r) = 0"""
    if sigma <= 0:
        raise ConfigurationError(f"sigma должна быть положительной, получено {sigma}", {"sigma": sigma})
    if R < 0:
        raise ConfigurationError(f"R должен быть >= 0, получено {R}", {"R": R})
    r = grid.nodes
    u = A * r ** 2 * np.exp(-(((r - R) / sigma) ** 4))
    return FieldState(grid=grid, t=0.0, u=u, v=np.zeros_like(r))


def homogeneous_data(consts: ModelConstants, T0: float, grid: RadialGrid) -> FieldState:
    """Пространственно постоянные данные a T0^{-alpha}, alpha a T0^{-alpha-1}"""
    if T0 <= 0:
        raise ConfigurationError(f"T0 должно быть положительным, получено {T0}", {"T0": T0})
    u0, v0 = homogeneous_solution(consts, T0, 0.0)
    size = grid.N + 1
    return FieldState(grid=grid, t=0.0, u=np.full(size, u0), v=np.full(size, v0))


def mode_perturbed_static_data(epsilon: float, grid: RadialGrid, report: StaticSolutionReport) -> FieldState:
    """u = u_S + eps v1, u_t = eps lambda1 v1"""
    r = grid.nodes
    v1 = report.eigenfunction(r)
    return FieldState(
        grid=grid,
        t=0.0,
        u=static_solution(r) + epsilon * v1,
        v=epsilon * report.lambda1 * v1,
    )


def selfsim_snapshot(profile: SimilarityProfile, T: float, t: float, grid: RadialGrid,
                     exterior: Optional[ExteriorBehavior] = None) -> FieldState:
    """
    Автомодельное решение (T-t)^{-alpha} U(r/(T-t)) и его точная производная по t.

    Raises:
        ConfigurationError: Если t >= T
        ProfileExteriorUnavailable: Сетка выходит за rho = 1, а профиль имеет полюс
    """
    if not t < T:
        raise ConfigurationError(f"Требуется t < T, получено t={t}, T={T}", {"t": t, "T": T})
    consts = profile.consts
    alpha = consts.alpha_f
    delta = T - t
    rho = grid.nodes / delta
    if exterior is None and rho[-1] > 1.0 and not profile.is_constant:
        exterior = continue_exterior(profile)
    U, Up = ProfileEvaluator(profile, exterior)(rho)
    u = delta ** (-alpha) * U
    v = delta ** (-alpha - 1.0) * (alpha * U + rho * Up)
    return FieldState(grid=grid, t=t, u=u, v=v)


def custom_table_data(path: Union[str, Path], consts: ModelConstants,
                      grid: Optional[RadialGrid] = None) -> FieldState:
    """
    Данные из таблицы состояния `r u v`.

    Raises:
        InvalidState: Таблица записана для другого p или на другой сетке
    """
    state, p = FieldState.from_table(Path(path).read_text(encoding="utf-8"))
    if p != consts.p:
        raise InvalidState(f"Таблица записана для p={p}, ожидалось p={consts.p}", {"path": str(path)})
    if grid is not None and grid != state.grid:
        raise InvalidState("Сетка таблицы не совпадает с сеткой запуска",
                           {"table": (state.grid.N, state.grid.r_max), "run": (grid.N, grid.r_max)})
    return state
