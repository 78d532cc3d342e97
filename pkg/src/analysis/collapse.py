"""
Коллапс профилей на параболическую F(z) = a/(1 + b z^2)^alpha, z = r/delta^{1/2},
и квартичную G(z) = a/(1 + d z^4)^alpha, z = r/delta^{1/4}, кривые.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares

from ..config.lab_config import AnalysisControls
from ..core.constants import ModelConstants
from ..core.errors import ConfigurationError, NoCollapse
from ..core.grid import FieldState
from ..core.stencils import even_spline
from ..spectrum.modes import u0_eigenfunction
from ..utils.logger import get_structured_logger
from .report import FitModel, FitReport

logger = get_structured_logger("analysis.collapse")


def collapse_model(z: np.ndarray, coefficient: float, power: int, consts: ModelConstants) -> np.ndarray:
    """a/(1 + coefficient z^power)^alpha"""
    return consts.a * (1.0 + coefficient * z ** power) ** (-consts.alpha_f)


def predicted_parabolic_b(c1: float, consts: ModelConstants) -> float:
    """b = -d12 c1/(alpha a), d12 - коэффициент при rho^2 в xi_1"""
    d12 = u0_eigenfunction(consts, -1).coefficient(1)
    return -d12 * c1 / (consts.alpha_f * consts.a)


def predicted_quartic_d(c2: float, consts: ModelConstants) -> float:
    """d = -d23 c2/(alpha a), d23 - коэффициент при rho^4 в xi_2"""
    d23 = u0_eigenfunction(consts, -3).coefficient(2)
    return -d23 * c2 / (consts.alpha_f * consts.a)


def _collapsed_samples(states: Sequence[FieldState], T: float, consts: ModelConstants,
                       power: int, z_max: float, samples: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """(z, delta^alpha u) для каждого состояния; z ограничен сеткой"""
    blocks = []
    for state in states:
        delta = T - state.t
        if delta <= 0:
            raise ConfigurationError(f"Состояние при t={state.t} не раньше T={T}", {"t": state.t, "T": T})
        width = delta ** (1.0 / power)
        z_top = min(z_max, state.grid.r_max / width)
        z = np.linspace(0.0, z_top, samples)
        values = even_spline(state.grid.nodes, state.u)(z * width)
        blocks.append((z, delta ** consts.alpha_f * values))
    return blocks


def _check_states(states: Sequence[FieldState], T: float):
    if len(states) < 2:
        raise ConfigurationError("Нужно не меньше двух состояний", {"states": len(states)})
    deltas = np.array([T - s.t for s in states])
    if np.max(deltas) < 2.0 * np.min(deltas):
        raise ConfigurationError("delta состояний должны различаться хотя бы вдвое",
                                 {"deltas": deltas.tolist()})


def _collapse_fit(states: Sequence[FieldState], T: float, consts: ModelConstants, power: int,
                  threshold: float, model: FitModel, name: str,
                  controls: AnalysisControls) -> FitReport:
    _check_states(states, T)
    blocks = _collapsed_samples(states, T, consts, power, controls.z_max, controls.z_samples)
    z = np.concatenate([b[0] for b in blocks])
    y = np.concatenate([b[1] for b in blocks])
    z_top = float(z.max())

    # начальное приближение из линеаризации (a/y)^{1/alpha} - 1 = c z^power
    inner = (z > 0) & (y > 0)
    ratio = (consts.a / y[inner]) ** (1.0 / consts.alpha_f) - 1.0
    weights = z[inner] ** power
    c0 = float(np.dot(ratio, weights) / np.dot(weights, weights)) if weights.size else 0.0
    floor = -(1.0 - 1e-9) / z_top ** power
    c0 = max(c0, 0.5 * floor)

    def residuals(x):
        return (y - collapse_model(z, x[0], power, consts)) / consts.a

    fit = least_squares(residuals, x0=[c0], bounds=([floor], [np.inf]), ftol=1e-15, xtol=1e-15, gtol=1e-15)
    coefficient = float(fit.x[0])
    rms = float(np.sqrt(np.mean(fit.fun ** 2)))
    logger.log_fit(model=model.value, residual=rms, **{name: coefficient})
    if rms > threshold:
        raise NoCollapse(f"Состояния не коллапсируют на модель: невязка {rms:.3g} > {threshold}",
                         {"residual": rms, name: coefficient})
    return FitReport(model=model, params={name: coefficient, "T": float(T)}, residual=rms,
                     window=(0.0, z_top), samples=int(z.size))


def parabolic_collapse(states: Sequence[FieldState], T: float, consts: ModelConstants,
                       controls: Optional[AnalysisControls] = None) -> FitReport:
    """
    Совместная подгонка b по всем состояниям, z = r/sqrt(T - t).

    Raises:
        ConfigurationError: Меньше двух состояний или delta различаются меньше чем вдвое
        NoCollapse: Невязка выше collapse_threshold
    """
    ctl = controls or AnalysisControls()
    return _collapse_fit(states, T, consts, 2, ctl.collapse_threshold, FitModel.PARABOLIC, "b", ctl)


def quartic_collapse(states: Sequence[FieldState], T: float, consts: ModelConstants,
                     controls: Optional[AnalysisControls] = None) -> FitReport:
    """Совместная подгонка d, z = r/(T - t)^{1/4}"""
    ctl = controls or AnalysisControls()
    return _collapse_fit(states, T, consts, 4, ctl.quartic_threshold, FitModel.QUARTIC, "d", ctl)


def collapse_curve_table(states: Sequence[FieldState], T: float, consts: ModelConstants,
                         coefficient: float, power: int = 2,
                         controls: Optional[AnalysisControls] = None) -> str:
    """Таблица `z value_model value_data`, блок на каждое состояние"""
    ctl = controls or AnalysisControls()
    lines = ["# z value_model value_data"]
    for state, (z, data) in zip(states, _collapsed_samples(states, T, consts, power, ctl.z_max, ctl.z_samples)):
        lines.append(f"# t={state.t:.17g} delta={T - state.t:.17g}")
        model = collapse_model(z, coefficient, power, consts)
        lines.extend(f"{zi:.17g} {mi:.17g} {di:.17g}" for zi, mi, di in zip(z, model, data))
    return "\n".join(lines) + "\n"
