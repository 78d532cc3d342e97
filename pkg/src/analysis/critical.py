"""
Диагностика вблизи порога разрушения: отскок и возврат, отход от критического
автомодельного решения, сравнение с промежуточными аттракторами.
"""
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from scipy.optimize import least_squares
from scipy.signal import find_peaks, medfilt

from ..config.lab_config import AnalysisControls
from ..core.constants import ModelConstants
from ..core.errors import ConfigurationError, FitDegenerate, NoBounce, WindowTooShort
from ..core.grid import FieldState
from ..profiles.exterior import ExteriorBehavior, ProfileEvaluator
from ..profiles.shooting import SimilarityProfile
from ..spectrum.static import static_solution_family
from ..utils.logger import get_structured_logger
from .blowup import rescaled_profile
from .report import FitModel, FitReport, central_columns

logger = get_structured_logger("analysis.critical")

MAX_WINDOW_PASSES = 8


class BounceTimes(NamedTuple):
    """Время отскока t1 и возврата t2 (None, если расчет закончился раньше)"""
    t1: float
    t2: Optional[float]


def _smoothed(values: np.ndarray, kernel: int) -> np.ndarray:
    if kernel <= 1:
        return values
    kernel = kernel if kernel % 2 else kernel + 1
    half = kernel // 2
    padded = np.pad(values, half, mode="edge")
    return medfilt(padded, kernel)[half:-half]


def bounce_diagnostics(trace, kernel: int = 5) -> BounceTimes:
    """
    t1 - первый локальный минимум 1/max|u|, t2 - следующий за ним локальный максимум.

    Экстремумы ищутся на сглаженной медианным фильтром трассе.

    Raises:
        NoBounce: Трасса монотонна
    """
    times, u_center, u_max = central_columns(trace)
    amplitude = u_max if u_max is not None else np.abs(u_center)
    amplitude = np.maximum(amplitude, np.finfo(float).tiny)
    inverse = _smoothed(1.0 / amplitude, kernel)
    prominence = 1e-6 * float(np.ptp(inverse)) if inverse.size else 0.0

    minima, _ = find_peaks(-inverse, prominence=prominence)
    if minima.size == 0:
        raise NoBounce("На трассе нет отскока: 1/max|u| монотонна", {"samples": int(times.size)})
    first = int(minima[0])
    maxima, _ = find_peaks(inverse, prominence=prominence)
    later = maxima[maxima > first]
    t2 = float(times[later[0]]) if later.size else None
    logger.debug("Bounce located", t1=float(times[first]), t2=t2)
    return BounceTimes(float(times[first]), t2)


def _center_value(profile: SimilarityProfile) -> float:
    return float(profile.U[0])


def _seed_time(columns, U0: float, alpha: float, band: float) -> float:
    """
    Начальное T: t + (u/U(0))^{-1/alpha} на участке, где трассы еще совпадают.
    """
    t_ref, u_ref = columns[0]
    agree = u_ref > 0
    for t, u in columns[1:]:
        other = np.interp(t_ref, t, u, left=np.nan, right=np.nan)
        with np.errstate(invalid="ignore", divide="ignore"):
            agree &= np.abs(other - u_ref) <= band * np.abs(u_ref)
    index = np.flatnonzero(agree)
    if index.size == 0:
        raise FitDegenerate("Трассы не имеют общего автомодельного участка")
    middle = index[index.size // 3: max(2 * index.size // 3, index.size // 3 + 1)]
    return float(np.median(t_ref[middle] + (u_ref[middle] / U0) ** (-1.0 / alpha)))


def critical_departure_fit(traces: Sequence, profile: SimilarityProfile, lambda1: float,
                           consts: ModelConstants, controls: Optional[AnalysisControls] = None,
                           T_seed: Optional[float] = None) -> List[FitReport]:
    """
    Совместная подгонка u(t,0) = delta^{-alpha} (U(0) + C delta^{-lambda1}) по набору трасс.

    T общее для всех трасс, C свое у каждой. Окно каждой трассы - линейный режим
    |delta^alpha u / U(0) - 1| <= departure_band; окно и T уточняются попеременно
    до стабилизации. Знак C отличает ветвь разрушения от ветви рассеяния.

    Returns:
        Список FitReport (по одному на трассу) с параметрами T, C, lambda1, U0

    Raises:
        FitDegenerate: Трассы покинули линейный режим или окно слишком мало
    """
    ctl = controls or AnalysisControls()
    if not traces:
        raise ConfigurationError("Нужна хотя бы одна трасса")
    if lambda1 <= 0:
        raise ConfigurationError(f"lambda1 должно быть положительным, получено {lambda1}")
    alpha = consts.alpha_f
    U0 = _center_value(profile)
    columns = [central_columns(trace)[:2] for trace in traces]
    T = T_seed if T_seed is not None else _seed_time(columns, U0, alpha, ctl.departure_band)

    masks = None
    fit = None
    for _ in range(MAX_WINDOW_PASSES):
        new_masks = []
        for t, u in columns:
            delta = T - t
            with np.errstate(invalid="ignore"):
                ratio = np.where(delta > 0, np.abs(delta) ** alpha * u / U0 - 1.0, np.inf)
            new_masks.append((delta > 0) & (np.abs(ratio) <= ctl.departure_band))
        for mask in new_masks:
            if np.count_nonzero(mask) < ctl.min_window_samples:
                raise FitDegenerate("Трасса покинула линейный режим: мало точек в окне",
                                    {"samples": int(np.count_nonzero(mask)), "T": T})
        if masks is not None and all(np.array_equal(m, n) for m, n in zip(masks, new_masks)):
            break
        masks = new_masks

        windows = [(t[m], u[m]) for (t, u), m in zip(columns, masks)]
        t_stop = max(float(w[0][-1]) for w in windows)
        delta_ref = [max(float(np.median(T - w[0])), 1e-300) for w in windows]
        T_start = max(T, t_stop + 1e-12 * max(abs(t_stop), 1.0))

        def residuals(x, windows=windows, delta_ref=delta_ref):
            T_fit, K = x[0], x[1:]
            out = []
            for (t, u), k, d_ref in zip(windows, K, delta_ref):
                delta = np.maximum(T_fit - t, 1e-300)
                out.append((delta ** alpha * u - U0 - k * (delta / d_ref) ** (-lambda1)) / U0)
            return np.concatenate(out)

        x0 = np.concatenate(([T_start], np.zeros(len(windows))))
        fit = least_squares(residuals, x0=x0, bounds=([t_stop] + [-np.inf] * len(windows), np.inf),
                            x_scale=np.concatenate(([max(min(delta_ref), 1e-12)], np.full(len(windows), 1e-2))),
                            ftol=1e-15, xtol=1e-15, gtol=1e-15)
        T = float(fit.x[0])

    reports = []
    offset = 0
    for (t, u), mask, k, d_ref in zip(columns, masks, fit.x[1:], delta_ref):
        count = int(np.count_nonzero(mask))
        part = fit.fun[offset:offset + count]
        offset += count
        rms = float(np.sqrt(np.mean(part ** 2)))
        C = float(k * d_ref ** lambda1)
        if rms > ctl.rate_tolerance:
            raise FitDegenerate("Трасса не описывается линейным отходом",
                                {"residual": rms, "tolerance": ctl.rate_tolerance})
        window = t[mask]
        logger.log_fit(model="departure", residual=rms, T=T, C=C)
        reports.append(FitReport(model=FitModel.DEPARTURE,
                                 params={"T": T, "C": C, "lambda1": float(lambda1), "U0": U0},
                                 residual=rms, window=(float(window[0]), float(window[-1])),
                                 samples=count))
    return reports


def departure_time(trace, T: float, center_value: float, consts: ModelConstants,
                   threshold: float = 0.3) -> float:
    """
    Первый момент, когда |delta^alpha u(t,0)/U(0) - 1| достигает threshold.

    Raises:
        FitDegenerate: Трасса не отходит от автомодельного решения до T
    """
    times, u_center, _ = central_columns(trace)
    delta = T - times
    before = delta > 0
    deviation = np.abs(delta[before] ** consts.alpha_f * u_center[before] / center_value - 1.0)
    above = np.flatnonzero(deviation >= threshold)
    if above.size == 0:
        raise FitDegenerate("Трасса не отходит от критического решения", {"threshold": threshold})
    return float(times[before][above[0]])


def departure_time_slope(amplitudes: Sequence[float], departure_times: Sequence[float],
                         A_star: float) -> FitReport:
    """
    Наклон времени отхода по -ln|A - A*|; ожидается 1/lambda1.

    Raises:
        WindowTooShort: Меньше трех амплитуд
        FitDegenerate: Амплитуда совпадает с A* или наклон неположителен
    """
    A = np.asarray(amplitudes, dtype=float)
    times = np.asarray(departure_times, dtype=float)
    if A.size < 3 or A.size != times.size:
        raise WindowTooShort("Нужно не меньше трех пар (A, t_dep)", {"samples": int(A.size)})
    gap = np.abs(A - A_star)
    if np.any(gap == 0.0):
        raise FitDegenerate("Амплитуда совпадает с A*")
    x = -np.log(gap)
    (slope, intercept), residual, *_ = np.polyfit(x, times, 1, full=True)
    if slope <= 0:
        raise FitDegenerate("Время отхода не растет с глубиной бисекции", {"slope": float(slope)})
    rms = float(np.sqrt(residual[0] / A.size)) if residual.size else 0.0
    logger.log_fit(model="departure_slope", residual=rms, slope=float(slope))
    return FitReport(model=FitModel.DEPARTURE_SLOPE,
                     params={"slope": float(slope), "intercept": float(intercept), "lambda1": 1.0 / float(slope)},
                     residual=rms, window=(float(x.min()), float(x.max())), samples=int(A.size))


def match_self_similar(state: FieldState, profile: SimilarityProfile, T: float, consts: ModelConstants,
                       rho_max: float = 0.8, samples: int = 81,
                       exterior: Optional[ExteriorBehavior] = None) -> FitReport:
    """
    Отклонение delta^alpha u(t, rho delta) от U(rho) на [0, rho_max].

    residual - среднеквадратичное, max_deviation - максимальное отклонение,
    оба отнесены к max|U| на окне.
    """
    table = rescaled_profile(state, T, consts, rho_max, samples)
    U, _ = ProfileEvaluator(profile, exterior)(table[:, 0])
    scale = float(np.max(np.abs(U)))
    deviation = (table[:, 1] - U) / scale
    rms = float(np.sqrt(np.mean(deviation ** 2)))
    worst = float(np.max(np.abs(deviation)))
    logger.log_fit(model="self_similar", residual=rms, max_deviation=worst)
    return FitReport(model=FitModel.SELF_SIMILAR, params={"T": float(T), "max_deviation": worst},
                     residual=rms, window=(0.0, float(rho_max)), samples=int(samples))


def match_static_orbit(state: FieldState, r_window: float, samples: int = 101) -> FitReport:
    """
    Подгонка масштаба L орбиты u_S^L(r) = L^{-1/2} u_S(r/L) на [0, r_window].

    Начальное приближение L0 = u(0)^{-2}. Невязки отнесены к u(0).

    Raises:
        FitDegenerate: u(0) <= 0
    """
    u_center = float(state.u[0])
    if u_center <= 0:
        raise FitDegenerate("Орбита статического решения требует u(0) > 0", {"u_center": u_center})
    r_window = min(r_window, state.grid.r_max)
    r = np.linspace(0.0, r_window, samples)
    values = np.interp(r, state.grid.nodes, state.u)

    def residuals(x):
        return (values - static_solution_family(np.exp(x[0]), r)) / u_center

    fit = least_squares(residuals, x0=[np.log(u_center ** -2)], ftol=1e-15, xtol=1e-15, gtol=1e-15)
    L = float(np.exp(fit.x[0]))
    rms = float(np.sqrt(np.mean(fit.fun ** 2)))
    worst = float(np.max(np.abs(fit.fun)))
    logger.log_fit(model="static_orbit", residual=rms, L=L)
    return FitReport(model=FitModel.STATIC_ORBIT, params={"L": L, "max_deviation": worst},
                     residual=rms, window=(0.0, float(r_window)), samples=int(samples))
