"""
Отчет о подгонке
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..evolve.integrator import EvolutionOutcome
from ..utils.formatter import OutputFormatter


class FitModel(Enum):
    """Модель подгонки"""
    RATE = "rate"
    EIGENMODE = "eigenmode"
    PARABOLIC = "parabolic"
    QUARTIC = "quartic"
    DEPARTURE = "departure"
    DEPARTURE_SLOPE = "departure_slope"
    BLOWUP_CURVE = "blowup_curve"
    SELF_SIMILAR = "self_similar"
    STATIC_ORBIT = "static_orbit"


@dataclass(frozen=True)
class FitReport:
    """
    Результат подгонки.

    Attributes:
        model: Модель
        params: Именованные параметры (T, c1, b, d, C, ...)
        residual: Среднеквадратичная невязка в окне
        window: Интервал (t, rho или z), на котором велась подгонка
        samples: Число точек в окне
    """
    model: FitModel
    params: Dict[str, float]
    residual: float
    window: Tuple[float, float]
    samples: int = 0
    extra: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not np.isfinite(self.residual):
            raise ValueError("Невязка подгонки должна быть конечной")
        if not self.window[0] < self.window[1]:
            raise ValueError(f"Вырожденное окно подгонки: {self.window}")

    def __getitem__(self, name: str) -> float:
        return self.params[name]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model.value,
            **{f"params.{k}": v for k, v in self.params.items()},
            "residual": self.residual,
            "window_lo": self.window[0],
            "window_hi": self.window[1],
            "samples": self.samples,
            **self.extra,
        }

    def to_key_value(self) -> str:
        """Блок `key = value`"""
        return OutputFormatter.format_key_value(self.to_dict())


def central_columns(trace) -> Tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]:
    """
    (t, u(t,0), max|u|) из EvolutionOutcome или массива строк трассы.

    Массив с двумя колонками читается как (t, u(t,0)).
    """
    if isinstance(trace, EvolutionOutcome):
        data = trace.central_trace
    else:
        data = np.asarray(trace, dtype=float)
    if data.ndim != 2 or data.shape[1] < 2:
        raise ValueError("Трасса должна иметь колонки (t, u_center[, u_max, ...])")
    u_max = data[:, 2] if data.shape[1] > 2 else None
    return data[:, 0], data[:, 1], u_max


def load_trace(path) -> np.ndarray:
    """Трасса из таблицы `t u_center u_max r_at_max E`"""
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] < 2:
        raise ValueError(f"Файл {path} не похож на трассу: меньше двух колонок")
    return data
