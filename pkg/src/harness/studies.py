"""
Исследования критических решений: автомодельное U_1 (p=7), статическое u_S (p=5),
отскок и возврат (p=3).
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..analysis.critical import (
    bounce_diagnostics,
    critical_departure_fit,
    departure_time,
    departure_time_slope,
    match_self_similar,
    match_static_orbit,
)
from ..analysis.report import FitReport
from ..config.lab_config import AnalysisControls
from ..core.constants import ModelConstants
from ..core.errors import ConfigurationError, FitDegenerate, NoBounce, RhoBeyondGrid, WindowTooShort
from ..evolve.integrator import Verdict, growth_rate_fit
from ..profiles.shooting import SimilarityProfile
from ..spectrum.static import StaticSolutionReport, static_bound_state, static_solution
from ..utils.formatter import OutputFormatter
from ..utils.logger import get_structured_logger
from .bisection import BisectionRecord, ProbeRunner
from .families import FamilyKind

logger = get_structured_logger("harness.studies")


@dataclass
class StudyReport:
    """Итог исследования: подгонки, значения и таблицы для экспорта"""
    name: str
    fits: Dict[str, FitReport] = field(default_factory=dict)
    values: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, str] = field(default_factory=dict)

    def to_key_value(self) -> str:
        data: Dict[str, Any] = {"study": self.name, **self.values}
        for key, fit in self.fits.items():
            data[key] = fit.to_dict()
        return OutputFormatter.format_key_value(data)


def _marginal_outcomes(record: BisectionRecord):
    lower, upper = record.marginal
    if lower is None or upper is None or lower.outcome is None or upper.outcome is None:
        raise ConfigurationError("Запись бисекции не содержит результатов пограничной пары",
                                 {"family": record.family})
    return lower.outcome, upper.outcome


def critical_self_similar_study(record: BisectionRecord, profile: SimilarityProfile, lambda1: float,
                                consts: ModelConstants, controls: Optional[AnalysisControls] = None,
                                rho_max: float = 0.8) -> StudyReport:
    """
    Пограничная пара у порога против автомодельного U_1.

    Совместная подгонка отхода дает общее T и коэффициенты C разных знаков;
    снимки пары сравниваются с U_1 на [0, rho_max]; времена отхода проб
    лестницы дают наклон 1/lambda1 по -ln|A - A*|.
    """
    ctl = controls or AnalysisControls()
    outcomes = _marginal_outcomes(record)
    report = StudyReport(name="critical_self_similar")
    fits = critical_departure_fit(list(outcomes), profile, lambda1, consts, ctl)
    report.fits["departure_low"], report.fits["departure_high"] = fits
    T = fits[0]["T"]
    report.values.update(T=T, C_low=fits[0]["C"], C_high=fits[1]["C"],
                         opposite_signs=bool(np.sign(fits[0]["C"]) != np.sign(fits[1]["C"])))

    best: Optional[FitReport] = None
    for outcome in outcomes:
        for state in outcome.snapshots:
            if state.t >= T:
                continue
            try:
                match = match_self_similar(state, profile, T, consts, rho_max)
            except RhoBeyondGrid:
                continue
            if best is None or match.residual < best.residual:
                best = match
    if best is not None:
        report.fits["self_similar"] = best
    else:
        logger.warning("No snapshot available for self-similar match", family=record.family)

    A_star = 0.5 * (record.final[0] + record.final[1])
    amplitudes, times = [], []
    for amplitude, trace in sorted(record.traces().items()):
        if amplitude == A_star:
            continue
        try:
            times.append(departure_time(trace, T, float(profile.U[0]), consts, ctl.departure_band))
        except FitDegenerate:
            continue
        amplitudes.append(amplitude)
    try:
        slope = departure_time_slope(amplitudes, times, A_star)
        report.fits["departure_slope"] = slope
        report.values.update(lambda1_from_slope=slope["lambda1"], lambda1_spectrum=float(lambda1))
    except (WindowTooShort, FitDegenerate) as e:
        logger.warning("Departure slope unavailable", reason=str(e))
    report.tables["departure_times"] = OutputFormatter.format_rows(
        list(zip(amplitudes, times)), header=["amplitude", "t_departure"])
    return report


def static_critical_study(runner: ProbeRunner, epsilons: Sequence[float] = (1e-3, -1e-3, 1e-5, -1e-5),
                          static_report: Optional[StaticSolutionReport] = None,
                          orbit_record: Optional[BisectionRecord] = None,
                          r_window: float = 4.0) -> StudyReport:
    """
    Дихотомия по знаку epsilon для u_S + epsilon v1 и скорость роста отклонения.

    Для записи бисекции gauss4 (orbit_record) снимки пограничной пары
    сравниваются с орбитой u_S^L.
    """
    if runner.consts.p != 5:
        raise ConfigurationError("Статическое критическое решение существует только при p=5", {"p": runner.consts.p})
    if runner.family.kind is not FamilyKind.MODE_PERTURBED_STATIC:
        raise ConfigurationError("Требуется семейство mode_perturbed_static", {"kind": runner.family.kind.value})
    bound = static_report or runner.family.static_report or static_bound_state(runner.family.bound_state)
    runner.family.static_report = bound
    baseline = float(static_solution(0.0))

    report = StudyReport(name="static_critical")
    report.values["lambda1"] = bound.lambda1
    rows: List[tuple] = []
    verdicts: Dict[float, str] = {}
    for result in runner.probe_many(list(epsilons)):
        eps = result.amplitude
        verdicts[eps] = result.verdict.value
        rate = None
        if result.outcome is not None:
            try:
                rate = growth_rate_fit(result.outcome, baseline, eps).rate
            except WindowTooShort as e:
                logger.warning("Growth window too short", epsilon=eps, reason=str(e))
        rows.append((eps, result.verdict.value, rate))
    report.tables["dichotomy"] = OutputFormatter.format_rows(rows, header=["epsilon", "verdict", "rate"])

    dichotomy = True
    for eps in epsilons:
        if -eps in verdicts and eps > 0:
            pair = {verdicts[eps], verdicts[-eps]}
            dichotomy &= pair == {Verdict.BLOWUP.value, Verdict.DISPERSAL.value}
    rates = [row[2] for row in rows if row[2] is not None]
    report.values["dichotomy"] = dichotomy
    if rates:
        report.values["rate_mean"] = float(np.mean(rates))
        report.values["rate_relative_error"] = float(abs(np.mean(rates) / bound.lambda1 - 1.0))

    if orbit_record is not None:
        best: Optional[FitReport] = None
        for outcome in _marginal_outcomes(orbit_record):
            for state in outcome.snapshots:
                if state.u[0] <= 0:
                    continue
                match = match_static_orbit(state, r_window)
                if best is None or match.residual < best.residual:
                    best = match
        if best is not None:
            report.fits["static_orbit"] = best
    logger.info("Static critical study finished", dichotomy=dichotomy, rates=len(rates))
    return report


def bounce_return_study(runner: ProbeRunner, amplitudes: Sequence[float],
                        controls: Optional[AnalysisControls] = None) -> StudyReport:
    """
    Времена отскока t1 и возврата t2 для набора амплитуд над порогом.

    Ожидается почти постоянное t1 и рост t2 при приближении к A*.
    """
    ctl = controls or AnalysisControls()
    report = StudyReport(name="bounce_return")
    rows = []
    for result in runner.probe_many(sorted(amplitudes, reverse=True)):
        t1 = t2 = None
        if result.outcome is not None:
            try:
                t1, t2 = bounce_diagnostics(result.outcome, ctl.smoothing_kernel)
            except NoBounce:
                pass
        rows.append((result.amplitude, result.verdict.value, t1, t2))
    report.tables["bounce"] = OutputFormatter.format_rows(rows, header=["amplitude", "verdict", "t1", "t2"])

    t1_values = np.array([row[2] for row in rows if row[2] is not None])
    t2_values = [row[3] for row in rows if row[3] is not None]
    if t1_values.size:
        report.values["t1_spread"] = float(np.ptp(t1_values) / np.mean(t1_values))
    # амплитуды идут по убыванию, к A*
    report.values["t2_increasing"] = bool(len(t2_values) >= 2 and np.all(np.diff(t2_values) > 0))
    logger.info("Bounce study finished", probes=len(rows), bounces=int(t1_values.size))
    return report
