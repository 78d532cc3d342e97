"""
Эволюция до вердикта: разрушение, рассеяние или неопределенность.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from ..config.lab_config import EvolutionControls
from ..core.constants import ModelConstants
from ..core.energy import energy
from ..core.errors import GridTooSmall, NonFiniteDetected, WindowTooShort
from ..core.grid import FieldState
from ..utils.logger import get_structured_logger
from .operator import rk4_arrays

logger = get_structured_logger("evolve.integrator")

SUPPORT_LEVEL = 1e-10
TINY_FLOOR = 1e-12


class Verdict(Enum):
    """Итог эволюции"""
    DISPERSAL = "dispersal"
    BLOWUP = "blowup"
    INCONCLUSIVE = "inconclusive"


@dataclass
class EvolutionOutcome:
    """
    Результат эволюции.

    Attributes:
        verdict: Вердикт
        T_est: Оценка времени разрушения (только при разрушении)
        rS_est: Положение максимума |u| на последнем шаге
        central_trace: Строки (t, u(t,0), max|u|, argmax r)
        energy_trace: Строки (t, E)
        snapshots: Сохраненные состояния
        final_state: Последнее состояние
        steps: Число шагов
        disp_floor: Использованный порог рассеяния
        diag_max: Итоговый max|u| в области контроля рассеяния
            (вся сетка при sommerfeld, r <= diagnostic_radius при isolated)
    """
    verdict: Verdict
    central_trace: np.ndarray = field(repr=False)
    energy_trace: np.ndarray = field(repr=False)
    final_state: FieldState = field(repr=False)
    snapshots: List[FieldState] = field(default_factory=list, repr=False)
    T_est: Optional[float] = None
    rS_est: float = 0.0
    steps: int = 0
    disp_floor: float = 0.0
    diag_max: float = 0.0

    @property
    def t_final(self) -> float:
        return self.final_state.t

    @property
    def times(self) -> np.ndarray:
        return self.central_trace[:, 0]

    @property
    def u_center(self) -> np.ndarray:
        return self.central_trace[:, 1]

    @property
    def u_max(self) -> np.ndarray:
        return self.central_trace[:, 2]

    def to_trace_table(self) -> str:
        """Строки `t u_center u_max r_at_max E`"""
        lines = ["# t u_center u_max r_at_max E"]
        for (t, uc, um, rm), (_, E) in zip(self.central_trace, self.energy_trace):
            lines.append(f"{t:.17g} {uc:.17g} {um:.17g} {rm:.17g} {E:.17g}")
        return "\n".join(lines) + "\n"

    def summary(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "T_est": self.T_est,
            "rS_est": self.rS_est,
            "t_final": self.t_final,
            "steps": self.steps,
            "u_max": float(self.u_max[-1]) if self.central_trace.size else 0.0,
        }


def support_radius(state: FieldState) -> float:
    """Наибольший r, где |u| или |v| превышает SUPPORT_LEVEL от пика"""
    magnitude = np.maximum(np.abs(state.u), np.abs(state.v))
    peak = float(np.max(magnitude))
    if peak == 0.0:
        return 0.0
    active = np.flatnonzero(magnitude > SUPPORT_LEVEL * peak)
    return float(state.grid.nodes[active[-1]])


def estimate_blowup_time(times: np.ndarray, amplitudes: np.ndarray, consts: ModelConstants) -> float:
    """
    T по линейной подгонке max|u|^{-1/alpha} от t на последней декаде роста.

    При нехватке точек или вырожденной подгонке используется
    T = t + (a/u)^{1/alpha} по последней точке.
    """
    alpha = consts.alpha_f
    t_last = float(times[-1])
    u_last = float(amplitudes[-1])
    fallback = t_last + (consts.a / u_last) ** (1.0 / alpha)
    window = amplitudes >= u_last / 10.0
    if np.count_nonzero(window) < 3:
        return fallback
    y = amplitudes[window] ** (-1.0 / alpha)
    slope, intercept = np.polyfit(times[window], y, 1)
    if slope >= 0.0:
        return fallback
    T = -intercept / slope
    return float(T) if T > t_last else fallback


class _Recorder:
    """Трассы и снимки в ходе эволюции"""

    def __init__(self, initial: FieldState, controls: EvolutionControls, consts: ModelConstants):
        self.grid = initial.grid
        self.consts = consts
        self.controls = controls
        self.trace: List[List[float]] = []
        self.energy: List[List[float]] = []
        self.snapshots: List[FieldState] = []
        self.pending_times = [t for t in controls.snapshot_times if t >= initial.t]
        self.pending_amplitudes = list(controls.snapshot_amplitudes)
        self.growth_t: List[float] = []
        self.growth_u: List[float] = []

    def record(self, t: float, u: np.ndarray, v: np.ndarray):
        absu = np.abs(u)
        j = int(np.argmax(absu))
        self.trace.append([t, float(u[0]), float(absu[j]), float(self.grid.nodes[j])])
        state = FieldState(grid=self.grid, t=t, u=u, v=v)
        self.energy.append([t, energy(state, self.consts)])

    def capture(self, t: float, u: np.ndarray, v: np.ndarray, m: float):
        while self.pending_times and abs(self.pending_times[0] - t) <= 1e-12 * max(1.0, abs(t)):
            self.pending_times.pop(0)
            self.snapshots.append(FieldState(grid=self.grid, t=t, u=u, v=v))
        while self.pending_amplitudes and m >= self.pending_amplitudes[0]:
            self.pending_amplitudes.pop(0)
            self.snapshots.append(FieldState(grid=self.grid, t=t, u=u, v=v))

    def next_snapshot_time(self) -> Optional[float]:
        return self.pending_times[0] if self.pending_times else None


def evolve(initial: FieldState, controls: EvolutionControls, consts: ModelConstants,
           run_id: Optional[str] = None) -> EvolutionOutcome:
    """
    Интегрирование до вердикта.

    Шаг dt = cfl*h; после max|u| > collapse_threshold шаг
    dt = min(cfl*h, safety*max|u|^{-(p-1)/2}). Разрушение объявляется при
    max|u| >= u_stop, рассеяние - когда max|u| держится ниже disp_floor в
    течение disp_window и не раньше t0 + support_radius + diagnostic_radius.
    Если этот срок позже горизонта отражения (данные во всю сетку), достаточно
    того, что max|u| уже побывал выше порога в области контроля.
    При sommerfeld контролируется вся сетка (окно 2*r_max), при isolated -
    диагностическая область r <= diagnostic_radius (окно 2*diagnostic_radius).

    Args:
        initial: Начальное состояние
        controls: Параметры эволюции
        consts: Константы модели
        run_id: Идентификатор запуска для логов

    Returns:
        EvolutionOutcome

    Raises:
        GridTooSmall: При изолированной границе отраженный сигнал достигает
            диагностической области до вердикта
        NonFiniteDetected: Нечисловые значения вне режима коллапса
    """
    log = get_structured_logger("evolve.integrator", run_id) if run_id else logger
    grid = initial.grid
    h = grid.h
    p = consts.p
    r = grid.nodes
    isolated = controls.boundary == "isolated"
    r_diag = min(controls.diagnostic_radius or grid.r_max / 4.0, grid.r_max)
    diag = r <= r_diag
    # уходящая половина данных при изоляции остается на сетке навсегда
    watched = diag if isolated else np.ones_like(diag)
    disp_window = controls.disp_window or (2.0 * r_diag if isolated else 2.0 * grid.r_max)
    initial_peak = initial.max_abs_u
    disp_floor = controls.disp_floor or (1e-3 * initial_peak if initial_peak > 0.0 else TINY_FLOOR)
    initial_support = support_radius(initial)
    # входящие данные должны пройти центр и покинуть диагностическую область
    arrival = initial.t + initial_support + r_diag
    horizon = np.inf
    if isolated:
        horizon = initial.t + 2.0 * grid.r_max - initial_support - r_diag
    # данные во всю сетку (хвост u_S) не успевают прийти до горизонта:
    # достаточно, чтобы поле побывало выше порога в области контроля
    entry_suffices = arrival > horizon

    recorder = _Recorder(initial, controls, consts)
    u = np.array(initial.u)
    v = np.array(initial.v)
    t = initial.t
    steps = 0
    below_since: Optional[float] = None
    entered = False
    verdict = Verdict.INCONCLUSIVE
    collapsing = False
    dt_base = controls.cfl * h

    recorder.record(t, u, v)
    recorder.capture(t, u, v, float(np.max(np.abs(u))))

    while True:
        m = float(np.max(np.abs(u)))
        m_watched = float(np.max(np.abs(u[watched])))

        if m >= controls.u_stop:
            verdict = Verdict.BLOWUP
            break
        if m_watched < disp_floor:
            below_since = t if below_since is None else below_since
            settled = t >= arrival or (entered and entry_suffices)
            if t - below_since >= disp_window and settled:
                verdict = Verdict.DISPERSAL
                break
        else:
            below_since = None
            entered = True
        if t >= controls.t_max or steps >= controls.max_steps:
            break
        if t > horizon:
            raise GridTooSmall(
                "Отраженный от границы сигнал достиг диагностической области до вердикта",
                {"t": t, "horizon": horizon, "r_max": grid.r_max},
            )

        dt = dt_base
        if m > controls.collapse_threshold:
            dt = min(dt_base, controls.safety * m ** (-consts.collapse_exponent))
            if not collapsing:
                collapsing = True
                log.log_step_collapse(t=t, max_u=m, dt=dt)
        dt = min(dt, controls.t_max - t)
        target = recorder.next_snapshot_time()
        if target is not None and t < target < t + dt:
            dt = target - t

        for _ in range(controls.max_refinements + 1):
            u_new, v_new = rk4_arrays(u, v, dt, h, p, controls.boundary)
            if np.all(np.isfinite(u_new)) and np.all(np.isfinite(v_new)):
                break
            dt *= 0.5
        else:
            if collapsing:
                verdict = Verdict.BLOWUP
                break
            raise NonFiniteDetected("Нечисловые значения без коллапса", {"t": t, "dt": dt})

        u, v = u_new, v_new
        t = target if target is not None and abs(t + dt - target) <= 1e-12 * max(1.0, target) else t + dt
        steps += 1
        m = float(np.max(np.abs(u)))
        if collapsing:
            recorder.growth_t.append(t)
            recorder.growth_u.append(m)
        if steps % controls.trace_stride == 0 or m >= controls.u_stop:
            recorder.record(t, u, v)
        recorder.capture(t, u, v, m)

    if recorder.trace[-1][0] != t:
        recorder.record(t, u, v)
    final_state = FieldState(grid=grid, t=t, u=u, v=v)
    trace = np.array(recorder.trace)
    outcome = EvolutionOutcome(
        verdict=verdict,
        central_trace=trace,
        energy_trace=np.array(recorder.energy),
        final_state=final_state,
        snapshots=recorder.snapshots,
        rS_est=float(r[int(np.argmax(np.abs(u)))]),
        steps=steps,
        disp_floor=disp_floor,
        diag_max=float(np.max(np.abs(u[watched]))),
    )
    if verdict is Verdict.BLOWUP:
        if len(recorder.growth_t) >= 3:
            times, amplitudes = np.array(recorder.growth_t), np.array(recorder.growth_u)
        else:
            times, amplitudes = trace[:, 0], trace[:, 2]
        outcome.T_est = estimate_blowup_time(times, amplitudes, consts)
    log.log_verdict(verdict=verdict.value, t=t, steps=steps, T_est=outcome.T_est, rS_est=outcome.rS_est)
    return outcome


@dataclass(frozen=True)
class GrowthRate:
    """Экспоненциальный рост отклонения от статического решения"""
    rate: float
    log_amplitude: float
    window: tuple
    samples: int
    residual: float


def growth_rate_fit(outcome: EvolutionOutcome, baseline: float, epsilon: float,
                    min_samples: int = 8) -> GrowthRate:
    """
    Подгонка ln|u(t,0) - baseline| = ln C + lambda t на отклонениях из [10|eps|, 10^3|eps|].

    Raises:
        WindowTooShort: В окне меньше min_samples точек
    """
    times = outcome.times
    deviation = np.abs(outcome.u_center - baseline)
    scale = abs(epsilon)
    window = (deviation >= 10.0 * scale) & (deviation <= 1e3 * scale)
    if np.count_nonzero(window) < min_samples:
        raise WindowTooShort("Мало точек в окне экспоненциального роста",
                             {"samples": int(np.count_nonzero(window)), "required": min_samples})
    # только первый непрерывный участок роста
    indices = np.flatnonzero(window)
    breaks = np.flatnonzero(np.diff(indices) > 1)
    if breaks.size:
        indices = indices[: breaks[0] + 1]
    if indices.size < min_samples:
        raise WindowTooShort("Мало точек в окне экспоненциального роста",
                             {"samples": int(indices.size), "required": min_samples})
    t = times[indices]
    y = np.log(deviation[indices])
    (rate, intercept), residuals, *_ = np.polyfit(t, y, 1, full=True)
    rms = float(np.sqrt(residuals[0] / t.size)) if residuals.size else 0.0
    logger.log_fit(model="growth", residual=rms, rate=float(rate))
    return GrowthRate(rate=float(rate), log_amplitude=float(intercept),
                      window=(float(t[0]), float(t[-1])), samples=int(t.size), residual=rms)
