"""
Бисекция по параметру семейства: порог разрушения A*, граница разрушения в
центре A_0 и настройка b = 0.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config.lab_config import BisectionControls, EvolutionControls
from ..core.constants import ModelConstants
from ..core.errors import BracketInvalid, InconclusiveBand, PredicateNoisy
from ..core.grid import RadialGrid
from ..evolve.integrator import Verdict
from ..utils.logger import get_structured_logger
from .classify import ClassifyResult, classify
from .families import InitialDataFamily

logger = get_structured_logger("harness.bisection")

# r_S ближайшей к A_0 пробы вне центра относительно r_S первой такой пробы
CONTINUITY_RATIO = 0.25
NOISE_CELLS = 3


class BisectionTarget(Enum):
    """Цель бисекции"""
    A_STAR = "A_star"
    A_0 = "A_0"
    B_ZERO = "b_zero"


class A0Branch(Enum):
    """Характер перехода r_S -> 0"""
    CONTINUOUS = "continuous"
    JUMP = "jump"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class BracketStep:
    """Скобка после уровня бисекции"""
    level: int
    lo: float
    hi: float
    verdict_lo: str
    verdict_hi: str

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass
class BisectionRecord:
    """
    История бисекции.

    Attributes:
        family: Имя семейства
        target: Цель
        brackets: Скобки по уровням (вердикты на концах противоположны)
        final: Итоговая скобка
        probes: Сводки всех проб по значению параметра, с центральными трассами
        inconclusive: Значения параметра с неопределенным вердиктом
        non_monotone: Найдена инверсия вердиктов среди проб
        marginal: Полные результаты проб на концах итоговой скобки
    """
    family: str
    target: BisectionTarget
    brackets: List[BracketStep] = field(default_factory=list)
    final: Tuple[float, float] = (0.0, 0.0)
    probes: Dict[float, Dict[str, Any]] = field(default_factory=dict)
    inconclusive: List[float] = field(default_factory=list)
    non_monotone: bool = False
    marginal: Tuple[Optional[ClassifyResult], Optional[ClassifyResult]] = (None, None)

    def to_log(self) -> str:
        """Текстовый журнал `level lo hi verdict_lo verdict_hi`"""
        lines = [f"# family={self.family} target={self.target.value} non_monotone={str(self.non_monotone).lower()}",
                 "# level lo hi verdict_lo verdict_hi"]
        for step in self.brackets:
            lines.append(f"{step.level} {step.lo:.17g} {step.hi:.17g} {step.verdict_lo} {step.verdict_hi}")
        return "\n".join(lines) + "\n"

    def probe_table(self) -> str:
        """Сводка проб `amplitude verdict r_S T_est`"""
        lines = ["# amplitude verdict r_S T_est"]
        for amplitude in sorted(self.probes):
            probe = self.probes[amplitude]
            T_est = "none" if probe.get("T_est") is None else f"{probe['T_est']:.17g}"
            lines.append(f"{amplitude:.17g} {probe['verdict']} {probe['r_S']:.17g} {T_est}")
        return "\n".join(lines) + "\n"

    def traces(self) -> Dict[float, np.ndarray]:
        """Центральные трассы проб"""
        return {a: p["trace"] for a, p in self.probes.items() if p.get("trace") is not None}


Side = Callable[[ClassifyResult, float], Optional[str]]
LOW, HIGH = "low", "high"


def threshold_side(result: ClassifyResult, h: float) -> Optional[str]:
    """Рассеяние - нижняя сторона порога, разрушение - верхняя"""
    if result.verdict is Verdict.DISPERSAL:
        return LOW
    if result.verdict is Verdict.BLOWUP:
        return HIGH
    return None


def center_side(result: ClassifyResult, h: float) -> Optional[str]:
    """Разрушение вне центра (r_S > h) - нижняя сторона, в центре - верхняя"""
    if result.verdict is not Verdict.BLOWUP:
        return None
    return LOW if result.r_S > h else HIGH


_LABELS = {
    BisectionTarget.A_STAR: {LOW: "dispersal", HIGH: "blowup"},
    BisectionTarget.A_0: {LOW: "off_center", HIGH: "center"},
    BisectionTarget.B_ZERO: {LOW: "off_center", HIGH: "center"},
}


def _classify_job(args) -> ClassifyResult:
    runner, amplitude, level = args
    return runner.probe(amplitude, level)


@dataclass
class ProbeRunner:
    """
    Запуск проб для одного семейства.

    t_max растет в horizon_growth раз каждые growth_every уровней бисекции.
    Пробы одного уровня могут выполняться параллельно (jobs > 1).
    """
    family: InitialDataFamily
    grid: RadialGrid
    evolution: EvolutionControls
    consts: ModelConstants
    bisection: BisectionControls = field(default_factory=BisectionControls)
    jobs: int = 1
    run_id: Optional[str] = None
    classifier: Callable[..., ClassifyResult] = classify

    def controls_at(self, level: int) -> EvolutionControls:
        growth = self.bisection.horizon_growth ** (level // self.bisection.growth_every)
        return self.evolution if growth == 1.0 else self.evolution.with_horizon(growth)

    def probe(self, amplitude: float, level: int = 0) -> ClassifyResult:
        return self.classifier(self.family, amplitude, self.grid, self.controls_at(level),
                               self.consts, run_id=self.run_id)

    def probe_many(self, amplitudes: Sequence[float], level: int = 0) -> List[ClassifyResult]:
        if self.jobs <= 1 or len(amplitudes) <= 1:
            return [self.probe(a, level) for a in amplitudes]
        with ProcessPoolExecutor(max_workers=min(self.jobs, len(amplitudes))) as pool:
            return list(pool.map(_classify_job, [(self, a, level) for a in amplitudes]))


def _probe_summary(result: ClassifyResult, level: int) -> Dict[str, Any]:
    data = result.summary()
    data["level"] = level
    data["trace"] = result.outcome.central_trace if result.outcome is not None else None
    return data


def _find_inversions(sides: Dict[float, str]) -> List[Tuple[float, float]]:
    """Пары (a_low, a_high) с a_low > a_high"""
    lows = [a for a, s in sides.items() if s == LOW]
    highs = [a for a, s in sides.items() if s == HIGH]
    return [(lo, hi) for lo in lows for hi in highs if lo > hi]


def _bisect(runner: ProbeRunner, lo: float, hi: float, depth: int, target: BisectionTarget,
            side: Side, known: Sequence[ClassifyResult] = ()) -> BisectionRecord:
    controls = runner.bisection
    labels = _LABELS[target]
    h = runner.grid.h
    record = BisectionRecord(family=runner.family.name, target=target)
    sides: Dict[float, str] = {}
    results: Dict[float, ClassifyResult] = {}

    def register(batch: Sequence[ClassifyResult], level: int):
        for result in batch:
            results[result.amplitude] = result
            record.probes[result.amplitude] = _probe_summary(result, level)
            s = side(result, h)
            if s is None:
                record.inconclusive.append(result.amplitude)
            else:
                sides[result.amplitude] = s
            logger.log_probe(level=level, amplitude=result.amplitude, verdict=labels.get(s, "inconclusive"),
                             lower=lo, upper=hi)

    if not lo < hi:
        raise BracketInvalid(f"Требуется lo < hi, получено [{lo}, {hi}]", {"lo": lo, "hi": hi})
    known = [r for r in known if r.amplitude in (lo, hi)]
    missing = [a for a in (lo, hi) if all(r.amplitude != a for r in known)]
    register(list(known) + runner.probe_many(missing, 0), 0)
    if sides.get(lo) != LOW or sides.get(hi) != HIGH:
        raise BracketInvalid(
            f"Концы скобки должны иметь вердикты {labels[LOW]} и {labels[HIGH]}",
            {"lo": lo, "hi": hi, "verdict_lo": labels.get(sides.get(lo), "inconclusive"),
             "verdict_hi": labels.get(sides.get(hi), "inconclusive")},
        )
    record.brackets.append(BracketStep(0, lo, hi, labels[LOW], labels[HIGH]))

    floor = max(2.0 ** -depth * (hi - lo), controls.min_relative_width * max(abs(lo), abs(hi)))
    for level in range(1, depth + 1):
        if hi - lo <= floor:
            break
        mid = 0.5 * (lo + hi)
        register(runner.probe_many([mid], level), level)
        if mid not in sides:
            quarter = [lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo)]
            register(runner.probe_many(quarter, level), level)
            if all(q not in sides for q in quarter):
                record.final = (lo, hi)
                raise InconclusiveBand(
                    f"Порог не локализован: пробы внутри [{lo:.17g}, {hi:.17g}] неопределенны",
                    lower=lo, upper=hi, record=record,
                )
        inside = {a: s for a, s in sides.items() if lo <= a <= hi}
        highs = [a for a, s in inside.items() if s == HIGH]
        new_hi = min(highs)
        lows = [a for a, s in inside.items() if s == LOW and a < new_hi]
        new_lo = max(lows)
        if _find_inversions(inside):
            record.non_monotone = True
            logger.warning("Verdict inversion in bracket", level=level, lo=lo, hi=hi)
        lo, hi = new_lo, new_hi
        record.brackets.append(BracketStep(level, lo, hi, labels[LOW], labels[HIGH]))

    record.final = (lo, hi)
    record.marginal = (results.get(lo), results.get(hi))
    logger.info("Bisection finished", target=target.value, lo=lo, hi=hi,
                levels=len(record.brackets) - 1, non_monotone=record.non_monotone)
    return record


def bisect_threshold(runner: ProbeRunner, lo: float, hi: float, depth: Optional[int] = None) -> BisectionRecord:
    """
    Бисекция к порогу разрушения A*.

    Ширина доводится до 2^{-depth} исходной или до min_relative_width
    относительной, что больше. Неопределенная средняя проба не делит скобку:
    проверяются точки на четвертях, и если они тоже неопределенны, порог
    сообщается интервалом.

    Raises:
        BracketInvalid: classify(lo) не рассеяние или classify(hi) не разрушение
        InconclusiveBand: Скобка, внутри которой все пробы неопределенны
    """
    return _bisect(runner, lo, hi, depth or runner.bisection.depth, BisectionTarget.A_STAR, threshold_side)


@dataclass(frozen=True)
class A0Result:
    """Граница разрушения в центре"""
    A_0: float
    branch: A0Branch
    record: BisectionRecord
    r_S_ladder: Tuple[Tuple[float, float], ...] = ()

    @property
    def degenerate(self) -> bool:
        return self.branch is A0Branch.DEGENERATE


def _check_noise(record: BisectionRecord, h: float):
    if not record.non_monotone:
        return
    near_grid = [p for p in record.probes.values() if p["verdict"] == Verdict.BLOWUP.value
                 and p["r_S"] <= NOISE_CELLS * h]
    if near_grid:
        raise PredicateNoisy("Оценки r_S колеблются на масштабе шага сетки; требуется более мелкая сетка",
                             {"h": h, "probes": len(near_grid)})


def locate_A0(runner: ProbeRunner, lo: float, hi: float, depth: Optional[int] = None) -> A0Result:
    """
    Значение параметра, при котором r_S впервые достигает центра.

    Предикат: r_S > h (вне центра) против r_S <= h. Переход непрерывный, если
    r_S последних проб вне центра стремится к нулю, и скачок, если остается
    отделенным от нуля. Если уже lo дает разрушение в центре, результат
    вырожденный: A_0 = lo.

    Raises:
        BracketInvalid: На hi разрушение не в центре или на lo нет разрушения
        PredicateNoisy: Инверсии предиката при r_S на масштабе шага сетки
    """
    h = runner.grid.h
    first = runner.probe(lo, 0)
    if center_side(first, h) == HIGH:
        record = BisectionRecord(family=runner.family.name, target=BisectionTarget.A_0, final=(lo, lo))
        record.probes[lo] = _probe_summary(first, 0)
        logger.info("Center blowup at scan edge", A_0=lo)
        return A0Result(A_0=lo, branch=A0Branch.DEGENERATE, record=record)

    record = _bisect(runner, lo, hi, depth or runner.bisection.depth, BisectionTarget.A_0, center_side,
                     known=[first])
    _check_noise(record, h)
    ladder = sorted((a, p["r_S"]) for a, p in record.probes.items()
                    if p["verdict"] == Verdict.BLOWUP.value and p["r_S"] > h)
    A_0 = record.final[1]
    branch = A0Branch.JUMP
    if ladder and ladder[-1][1] <= CONTINUITY_RATIO * ladder[0][1]:
        branch = A0Branch.CONTINUOUS
    logger.info("A_0 located", A_0=A_0, branch=branch.value, last_r_S=ladder[-1][1] if ladder else None)
    return A0Result(A_0=A_0, branch=branch, record=record, r_S_ladder=tuple(ladder))


def tune_b_zero(runner: ProbeRunner, lo: float, hi: float, depth: Optional[int] = None) -> BisectionRecord:
    """
    Настройка данных на границу между разрушением в центре и вне центра (b = 0).

    Тот же предикат, что у locate_A0; marginal хранит полные результаты проб
    на концах итоговой скобки вместе со снимками для квартичного коллапса.

    Raises:
        BracketInvalid: Концы скобки не по разные стороны границы
        PredicateNoisy: Инверсии предиката на масштабе шага сетки
    """
    record = _bisect(runner, lo, hi, depth or runner.bisection.depth, BisectionTarget.B_ZERO, center_side)
    _check_noise(record, runner.grid.h)
    return record
