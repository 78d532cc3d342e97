"""
Классификация одной пробы: эволюция и вердикт с одной автоматической повторной попыткой.
"""
from dataclasses import dataclass, field
from itertools import count
from typing import Any, Dict, Optional

from tenacity import Retrying, retry_if_result, stop_after_attempt

from ..config.lab_config import EvolutionControls
from ..core.constants import ModelConstants
from ..core.errors import GridTooSmall
from ..core.grid import RadialGrid
from ..evolve.integrator import EvolutionOutcome, Verdict, evolve
from ..utils.logger import get_structured_logger
from .families import InitialDataFamily

logger = get_structured_logger("harness.classify")


@dataclass
class ClassifyResult:
    """
    Вердикт пробы.

    Attributes:
        verdict: dispersal, blowup или inconclusive
        amplitude: Значение параметра семейства
        r_S: Оценка радиуса разрушения (0 для рассеяния)
        T_est: Оценка времени разрушения
        outcome: Полный результат эволюции (None, если сетка оказалась мала)
        attempts: Число запусков
        reason: Причина неопределенного вердикта
    """
    verdict: Verdict
    amplitude: float
    r_S: float = 0.0
    T_est: Optional[float] = None
    outcome: Optional[EvolutionOutcome] = field(default=None, repr=False)
    attempts: int = 1
    reason: str = ""

    @property
    def inconclusive(self) -> bool:
        return self.verdict is Verdict.INCONCLUSIVE

    def summary(self) -> Dict[str, Any]:
        data = {
            "amplitude": self.amplitude,
            "verdict": self.verdict.value,
            "r_S": self.r_S,
            "T_est": self.T_est,
            "attempts": self.attempts,
        }
        if self.reason:
            data["reason"] = self.reason
        return data


def _is_inconclusive(result: ClassifyResult) -> bool:
    return result.inconclusive


def _last_result(retry_state) -> ClassifyResult:
    return retry_state.outcome.result()


def run_probe(family: InitialDataFamily, amplitude: float, grid: RadialGrid,
              controls: EvolutionControls, consts: ModelConstants,
              run_id: Optional[str] = None) -> ClassifyResult:
    """Один запуск эволюции без повторов; GridTooSmall дает неопределенный вердикт"""
    initial = family.build(amplitude, grid, consts)
    try:
        outcome = evolve(initial, controls, consts, run_id=run_id)
    except GridTooSmall as e:
        logger.warning("Grid too small for verdict", amplitude=amplitude, r_max=grid.r_max, t=e.details.get("t"))
        return ClassifyResult(verdict=Verdict.INCONCLUSIVE, amplitude=amplitude, reason="grid_too_small")
    r_S = outcome.rS_est if outcome.verdict is Verdict.BLOWUP else 0.0
    reason = "t_max_reached" if outcome.verdict is Verdict.INCONCLUSIVE else ""
    return ClassifyResult(verdict=outcome.verdict, amplitude=amplitude, r_S=r_S, T_est=outcome.T_est,
                          outcome=outcome, reason=reason)


def classify(family: InitialDataFamily, amplitude: float, grid: RadialGrid,
             controls: EvolutionControls, consts: ModelConstants,
             run_id: Optional[str] = None) -> ClassifyResult:
    """
    Вердикт для значения параметра семейства.

    Неопределенный вердикт запускает один повтор с удвоенными t_max и r_max
    (шаг сетки сохраняется), и только затем сообщается.

    Args:
        family: Семейство данных
        amplitude: Значение параметра
        grid: Сетка
        controls: Параметры эволюции
        consts: Константы модели
        run_id: Идентификатор для логов

    Returns:
        ClassifyResult
    """
    attempt_numbers = count(1)

    def attempt() -> ClassifyResult:
        number = next(attempt_numbers)
        scale = 2 ** (number - 1)
        attempt_grid = grid if number == 1 else RadialGrid(r_max=grid.r_max * scale, N=grid.N * scale)
        attempt_controls = controls if number == 1 else controls.with_horizon(float(scale))
        result = run_probe(family, amplitude, attempt_grid, attempt_controls, consts, run_id)
        result.attempts = number
        if result.inconclusive and number == 1:
            logger.info("Retrying inconclusive probe", amplitude=amplitude,
                        r_max=attempt_grid.r_max * 2, t_max=attempt_controls.t_max * 2)
        return result

    retryer = Retrying(
        stop=stop_after_attempt(2),
        retry=retry_if_result(_is_inconclusive),
        retry_error_callback=_last_result,
    )
    result = retryer(attempt)
    logger.info("Probe classified", amplitude=amplitude, verdict=result.verdict.value,
                r_S=result.r_S, attempts=result.attempts)
    return result
