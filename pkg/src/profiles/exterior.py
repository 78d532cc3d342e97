"""
Продолжение профиля за световой конус rho > 1.
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from ..config.lab_config import ShootingControls
from ..core.errors import Ambiguous, ConfigurationError, ProfileExteriorUnavailable
from ..utils.logger import get_structured_logger
from .shooting import SimilarityProfile, count_sign_changes
from .similarity import lightcone_series, similarity_system

logger = get_structured_logger("profiles.exterior")

_POLE_ONSET = 1e2


class ExteriorKind(Enum):
    """Поведение профиля вне светового конуса"""
    POLE = "pole"
    POWER_DECAY = "power_decay"


@dataclass(frozen=True)
class ExteriorBehavior:
    """
    Классификация продолжения профиля.

    Attributes:
        kind: Полюс или степенное убывание
        rho_0: Положение полюса (только для POLE)
        decay_exponent: Показатель убывания (только для POWER_DECAY)
        residue: Коэффициент d в U ~ d/(rho_0 - rho)^alpha (только для POLE)
        rho, U, Up: Таблица на (1, rho_end]
        fit_residual: Невязка подгонки
    """
    kind: ExteriorKind
    rho: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)
    Up: np.ndarray = field(repr=False)
    rho_0: Optional[float] = None
    decay_exponent: Optional[float] = None
    residue: Optional[float] = None
    fit_residual: float = 0.0

    @cached_property
    def hermite(self) -> CubicHermiteSpline:
        return CubicHermiteSpline(self.rho, self.U, self.Up)

    @property
    def rho_end(self) -> float:
        return float(self.rho[-1])

    def to_table(self, p: int, n: int) -> str:
        header = f"# p={p} n={n} exterior={self.kind.value}"
        if self.kind is ExteriorKind.POLE:
            header += f" rho_0={self.rho_0:.17g}"
        else:
            header += f" decay_exponent={self.decay_exponent:.17g}"
        lines = [header]
        for rho, U, Up in zip(self.rho, self.U, self.Up):
            lines.append(f"{rho:.17g} {U:.17g} {Up:.17g}")
        return "\n".join(lines) + "\n"


def _threshold_event(level: float, terminal: bool):
    def event(rho, y):
        return level - abs(y[0])

    event.terminal = terminal
    event.direction = -1
    return event


def _fit_pole(sol, rho_start: float, rho_stop: float, alpha: float, samples: int) -> Tuple[float, float, float]:
    """Подгонка |U|^{-1/alpha} = m rho + c около расходимости"""
    rho = np.linspace(rho_start, rho_stop, samples)
    U = sol.sol(rho)[0]
    y = np.abs(U) ** (-1.0 / alpha)
    (slope, intercept), residuals, *_ = np.polyfit(rho, y, 1, full=True)
    rho_0 = -intercept / slope
    residue = float(np.sign(U[-1]) * abs(slope) ** (-alpha))
    rms = float(np.sqrt(residuals[0] / samples)) if residuals.size else 0.0
    return float(rho_0), residue, rms


def _fit_power_law(rho: np.ndarray, U: np.ndarray) -> Tuple[float, float]:
    """log|U| = c0 + k log(rho) + c1/rho + c2/rho^2; возвращает (k, rms)"""
    design = np.column_stack((np.ones_like(rho), np.log(rho), 1.0 / rho, 1.0 / rho ** 2))
    target = np.log(np.abs(U))
    coeffs, *_ = np.linalg.lstsq(design, target, rcond=None)
    rms = float(np.sqrt(np.mean((design @ coeffs - target) ** 2)))
    return float(coeffs[1]), rms


def continue_exterior(profile: SimilarityProfile, rho_max: Optional[float] = None,
                      controls: Optional[ShootingControls] = None) -> ExteriorBehavior:
    """
    Интегрирование уравнения профиля наружу от rho = 1 + eps.

    Args:
        profile: Сошедшийся профиль
        rho_max: Предел продолжения (по умолчанию из controls)
        controls: Параметры стрельбы

    Returns:
        ExteriorBehavior

    Raises:
        Ambiguous: Ни полюс, ни степенной закон не установлены к rho_max
    """
    ctl = controls or ShootingControls()
    rho_max = rho_max or ctl.rho_max
    if rho_max <= 1.0:
        raise ConfigurationError(f"rho_max должен быть > 1, получено {rho_max}", {"rho_max": rho_max})

    consts = profile.consts
    alpha = consts.alpha_f
    start = 1.0 + ctl.eps_lightcone
    U1, Up1 = lightcone_series(profile.b_n, start, consts)
    onset = _threshold_event(_POLE_ONSET, terminal=False)
    divergence = _threshold_event(ctl.divergence_threshold, terminal=True)
    sol = solve_ivp(similarity_system(consts), (start, rho_max), [U1, Up1], method="DOP853",
                    rtol=ctl.rtol, atol=ctl.atol, events=(onset, divergence), dense_output=True)
    if sol.status == -1:
        raise Ambiguous(f"Интегрирование наружу прервано: {sol.message}", {"rho": float(sol.t[-1])})

    rho_end = float(sol.t[-1])
    rho = np.linspace(start, rho_end, max(200, int((rho_end - start) / ctl.sample_spacing) + 1))
    values = sol.sol(rho)

    if sol.status == 1:
        rho_stop = float(sol.t_events[1][0])
        rho_start = float(sol.t_events[0][0]) if sol.t_events[0].size else 0.5 * (start + rho_stop)
        rho_0, residue, rms = _fit_pole(sol, rho_start, rho_stop, alpha, ctl.pole_fit_samples)
        logger.info("Exterior pole detected", n=profile.n, rho_0=rho_0)
        return ExteriorBehavior(kind=ExteriorKind.POLE, rho=rho, U=values[0], Up=values[1],
                                rho_0=max(rho_0, rho_stop), residue=residue, fit_residual=rms)

    tail = np.geomspace(rho_max / 10.0, rho_max, 200) if rho_max > 10.0 else np.linspace(0.5 * (1.0 + rho_max), rho_max, 200)
    tail_U = sol.sol(tail)[0]
    if np.any(tail_U == 0.0) or count_sign_changes(tail_U) > 0:
        raise Ambiguous("Профиль меняет знак в хвосте, степенной закон не установлен", {"rho_max": rho_max})
    exponent, rms = _fit_power_law(tail, tail_U)
    if rms > ctl.decay_fit_tolerance:
        raise Ambiguous("Степенной закон не установлен к rho_max, увеличьте rho_max",
                        {"rho_max": rho_max, "residual": rms})
    logger.info("Exterior power decay", n=profile.n, exponent=exponent)
    return ExteriorBehavior(kind=ExteriorKind.POWER_DECAY, rho=rho, U=values[0], Up=values[1],
                            decay_exponent=exponent, fit_residual=rms)


class ProfileEvaluator:
    """
    U(rho) и U'(rho) для всех rho >= 0.

    Внутри конуса используется таблица профиля, снаружи таблица продолжения,
    за ее пределами степенная экстраполяция хвоста.
    """

    def __init__(self, profile: SimilarityProfile, exterior: Optional[ExteriorBehavior] = None):
        self.profile = profile
        self.exterior = exterior

    def __call__(self, rho) -> Tuple[np.ndarray, np.ndarray]:
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        U = np.empty_like(rho)
        Up = np.empty_like(rho)

        inner = rho <= 1.0
        U[inner], Up[inner] = self.profile.evaluate(rho[inner])
        outer = ~inner
        if not np.any(outer):
            return U, Up

        if self.profile.is_constant:
            U[outer] = self.profile.b_n
            Up[outer] = 0.0
            return U, Up
        ext = self.exterior
        if ext is None:
            raise ProfileExteriorUnavailable("Для rho > 1 требуется продолжение профиля",
                                             {"rho_max": float(rho.max())})
        if ext.kind is ExteriorKind.POLE:
            if rho.max() >= ext.rho_end:
                raise ProfileExteriorUnavailable(
                    "Профиль имеет полюс вне светового конуса",
                    {"rho_0": ext.rho_0, "requested": float(rho.max())},
                )

        near = outer & (rho <= ext.rho_end)
        U[near] = ext.hermite(np.maximum(rho[near], ext.rho[0]))
        Up[near] = ext.hermite.derivative()(np.maximum(rho[near], ext.rho[0]))
        far = outer & (rho > ext.rho_end)
        if np.any(far):
            k = ext.decay_exponent
            U_end = ext.U[-1]
            U[far] = U_end * (rho[far] / ext.rho_end) ** k
            Up[far] = k * U[far] / rho[far]
        return U, Up
