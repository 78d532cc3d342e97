"""
Подгонки вблизи момента разрушения: скорость, перемасштабированный профиль,
разложение по модам U_0, кривая разрушения.
"""
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import least_squares, minimize_scalar

from ..config.lab_config import AnalysisControls
from ..core.constants import ModelConstants
from ..core.errors import ConfigurationError, FitDegenerate, NonlinearResidual, RhoBeyondGrid, WindowTooShort
from ..core.grid import FieldState
from ..core.stencils import even_spline
from ..spectrum.modes import EigenMode, u0_eigenfunction
from ..utils.logger import get_structured_logger
from .report import FitModel, FitReport, central_columns

logger = get_structured_logger("analysis.blowup")


def _two_term(delta: np.ndarray, y: np.ndarray):
    design = np.column_stack((np.ones_like(delta), delta))
    coeffs, *_ = np.linalg.lstsq(design, y, rcond=None)
    return coeffs, y - design @ coeffs


def fit_blowup_rate(trace, consts: ModelConstants, controls: Optional[AnalysisControls] = None) -> FitReport:
    """
    Подгонка delta^alpha u(t,0) = a + c1 delta, delta = T - t.

    Окно - последняя декада роста перед u_end/10, где u_end - последнее значение
    трассы. T находится минимизацией невязки линейной модели (метод Брента на
    ограниченном интервале) и уточняется совместно с (a, c1).

    Args:
        trace: EvolutionOutcome или массив строк (t, u_center, ...)
        consts: Константы модели
        controls: Параметры анализа

    Returns:
        FitReport с параметрами T, a, c1, a_expected

    Raises:
        WindowTooShort: Трасса покрывает меньше двух декад или в окне мало точек
        NonlinearResidual: Невязка двучленной модели или отклонение a выше допуска
    """
    ctl = controls or AnalysisControls()
    alpha = consts.alpha_f
    times, u_center, _ = central_columns(trace)
    u_end = float(u_center[-1])
    positive = u_center > 0
    if u_end <= 0 or u_end / float(np.min(u_center[positive])) < 100.0:
        raise WindowTooShort("Трасса должна покрывать не меньше двух декад роста u(t,0)",
                             {"u_end": u_end})
    window = (u_center >= u_end / 100.0) & (u_center <= u_end / 10.0)
    if np.count_nonzero(window) < ctl.min_window_samples:
        raise WindowTooShort("Мало точек в последней декаде роста",
                             {"samples": int(np.count_nonzero(window)), "required": ctl.min_window_samples})
    t = times[window]
    u = u_center[window]
    t_last = float(times[-1])
    d0 = (consts.a / u_end) ** (1.0 / alpha)

    def linearity(T: float) -> float:
        delta = T - t
        _, residual = _two_term(delta, delta ** alpha * u)
        return float(np.dot(residual, residual))

    lower = t_last + d0 / ctl.T_search_factor
    upper = t_last + d0 * ctl.T_search_factor
    search = minimize_scalar(linearity, bounds=(lower, upper), method="bounded",
                             options={"xatol": 1e-10 * d0})
    T_brent = float(search.x)
    (a0, c10), _ = _two_term(T_brent - t, (T_brent - t) ** alpha * u)

    def residuals(x):
        T, a_fit, c1 = x
        delta = np.maximum(T - t, 1e-300)
        return (delta ** alpha * u - a_fit - c1 * delta) / consts.a

    scale = np.array([d0, consts.a, consts.a / max(float(T_brent - t[0]), d0)])
    polish = least_squares(residuals, x0=[T_brent, a0, c10], x_scale=scale,
                           bounds=([t_last, -np.inf, -np.inf], [np.inf, np.inf, np.inf]),
                           ftol=1e-15, xtol=1e-15, gtol=1e-15)
    T, a_fit, c1 = (float(v) for v in polish.x)
    rms = float(np.sqrt(np.mean(polish.fun ** 2)))
    logger.log_fit(model="rate", residual=rms, T=T, a=a_fit, c1=c1)

    if rms > ctl.rate_tolerance:
        raise NonlinearResidual("Невязка двучленной модели выше допуска",
                                {"residual": rms, "tolerance": ctl.rate_tolerance})
    if abs(a_fit / consts.a - 1.0) > ctl.amplitude_tolerance:
        raise NonlinearResidual("Амплитуда отличается от a: разрушение не в центре или загрязнение",
                                {"a_fit": a_fit, "a": consts.a})
    return FitReport(
        model=FitModel.RATE,
        params={"T": T, "a": a_fit, "c1": c1, "a_expected": consts.a},
        residual=rms,
        window=(float(t[0]), float(t[-1])),
        samples=int(t.size),
    )


def rescaled_profile(state: FieldState, T: float, consts: ModelConstants,
                     rho_max: float = 1.0, samples: int = 101) -> np.ndarray:
    """
    Таблица (rho, delta^alpha u(t, rho delta)), delta = T - t.

    Raises:
        ConfigurationError: t >= T
        RhoBeyondGrid: rho_max * delta за пределами сетки
    """
    delta = T - state.t
    if delta <= 0:
        raise ConfigurationError(f"Требуется t < T, получено t={state.t}, T={T}", {"t": state.t, "T": T})
    if rho_max * delta > state.grid.r_max:
        raise RhoBeyondGrid("rho_max*(T-t) выходит за сетку",
                            {"required": rho_max * delta, "available": state.grid.r_max})
    rho = np.linspace(0.0, rho_max, samples)
    values = even_spline(state.grid.nodes, state.u)(rho * delta)
    return np.column_stack((rho, delta ** consts.alpha_f * values))


def default_modes(consts: ModelConstants) -> List[EigenMode]:
    """
    Наименее затухающие моды U_0: xi_1, xi_2 и постоянная xi_bar_0.

    При p = 5 lambda_bar_0 = -3 совпадает с lambda_2, мода берется один раз.
    """
    modes: List[EigenMode] = []
    for lam in (-1, -3, consts.lambda_bar0):
        if all(mode.lam != float(lam) for mode in modes):
            modes.append(u0_eigenfunction(consts, lam))
    return modes


def fit_eigenmode_expansion(states: Sequence[FieldState], T: float, consts: ModelConstants,
                            modes: Optional[Sequence[EigenMode]] = None,
                            controls: Optional[AnalysisControls] = None) -> FitReport:
    """
    Линейная подгонка delta^alpha u - a = sum_k c_k delta^{-lambda_k} xi_k(rho) на rho в [0, rho_max].

    Параметры называются c1, c2 для первичных мод с lambda = -1, -3 и cbar0 для
    lambda_bar_0; прочие моды получают имя c[lambda].
    """
    ctl = controls or AnalysisControls()
    modes = list(modes) if modes is not None else default_modes(consts)
    if not states:
        raise ConfigurationError("Нужно хотя бы одно состояние")
    rows, targets = [], []
    for state in states:
        delta = T - state.t
        table = rescaled_profile(state, T, consts, ctl.rho_max, ctl.rho_samples)
        rho = table[:, 0]
        targets.append(table[:, 1] - consts.a)
        rows.append(np.column_stack([delta ** (-mode.lam) * mode.evaluate(rho) for mode in modes]))
    design = np.vstack(rows)
    target = np.concatenate(targets)
    norms = np.linalg.norm(design, axis=0)
    if np.any(norms == 0.0):
        raise FitDegenerate("Колонка модели тождественно равна нулю")
    coeffs, *_ = np.linalg.lstsq(design / norms, target, rcond=None)
    coeffs = coeffs / norms
    rms = float(np.sqrt(np.mean((design @ coeffs - target) ** 2)) / consts.a)

    params = {}
    for mode, c in zip(modes, coeffs):
        params[_mode_name(mode, consts)] = float(c)
    params["T"] = float(T)
    logger.log_fit(model="eigenmode", residual=rms, **params)
    return FitReport(model=FitModel.EIGENMODE, params=params, residual=rms,
                     window=(0.0, ctl.rho_max), samples=int(target.size))


def _mode_name(mode: EigenMode, consts: ModelConstants) -> str:
    if abs(mode.lam - float(consts.lambda_bar0)) < 1e-12:
        return "cbar0"
    if abs(mode.lam + 1.0) < 1e-12:
        return "c1"
    if abs(mode.lam + 3.0) < 1e-12:
        return "c2"
    return f"c[{mode.lam:g}]"


def blowup_curve_fit(states: Sequence[FieldState], consts: ModelConstants,
                     level: float = 0.5) -> FitReport:
    """
    Локальная кривая разрушения: (a/u)^{1/alpha} + t = T + b r^2.

    В подгонку идут точки, где u(t,r) >= level * u(t,0).

    Raises:
        FitDegenerate: Меньше трех точек или все точки в центре
    """
    alpha = consts.alpha_f
    r_all, z_all = [], []
    for state in states:
        u = state.u
        if u[0] <= 0:
            continue
        near = u >= level * u[0]
        # только связная окрестность центра
        stop = np.flatnonzero(~near)
        count = int(stop[0]) if stop.size else u.size
        r = state.grid.nodes[:count]
        r_all.append(r ** 2)
        z_all.append((consts.a / u[:count]) ** (1.0 / alpha) + state.t)
    if not r_all:
        raise FitDegenerate("Нет состояний с положительным u(t,0)")
    r2 = np.concatenate(r_all)
    z = np.concatenate(z_all)
    if r2.size < 3 or np.ptp(r2) == 0.0:
        raise FitDegenerate("Недостаточно точек для кривой разрушения", {"samples": int(r2.size)})
    (T, b), residuals, *_ = np.linalg.lstsq(np.column_stack((np.ones_like(r2), r2)), z, rcond=None)
    rms = float(np.sqrt(np.mean((T + b * r2 - z) ** 2)))
    logger.log_fit(model="blowup_curve", residual=rms, T=float(T), b=float(b))
    return FitReport(model=FitModel.BLOWUP_CURVE, params={"T": float(T), "b": float(b)},
                     residual=rms, window=(0.0, float(np.sqrt(r2.max()))), samples=int(r2.size))
