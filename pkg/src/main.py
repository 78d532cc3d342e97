"""
Координатор лаборатории: связывает модули с конфигурацией запуска и записью артефактов.
"""
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .analysis import (
    FitReport,
    blowup_curve_fit,
    bounce_diagnostics,
    collapse_curve_table,
    critical_departure_fit,
    fit_blowup_rate,
    fit_eigenmode_expansion,
    load_trace,
    parabolic_collapse,
    quartic_collapse,
    rescaled_profile,
)
from .config.lab_config import CampaignConfig, CampaignEntry, RunConfig
from .core.constants import derive_constants
from .core.errors import ConfigurationError, LabError, NotFound
from .core.grid import FieldState, RadialGrid
from .evolve import (
    EvolutionOutcome,
    energy_drift,
    evolve,
    gauss4_data,
    homogeneous_data,
    scaling_commutator,
    self_convergence_order,
)
from .harness import InitialDataFamily, run_campaign, summary_table
from .profiles import (
    ExteriorBehavior,
    ProfileShooter,
    SimilarityProfile,
    continue_exterior,
    parabolic_ode_residual,
    shoot_profile,
)
from .spectrum import (
    EigenMode,
    StaticSolutionReport,
    qep_spectrum,
    static_bound_state,
    static_residual,
    u0_eigenfunction,
    u0_spectrum,
    zero_mode_residual,
)
from .utils.artifacts import ArtifactWriter
from .utils.formatter import OutputFormatter
from .utils.logger import LoggerSetup, StructuredLogger

OUTPUT_ENV = "BLOWUP_LAB_OUTPUT"

FIT_MODELS = ("rate", "eigenmode", "parabolic", "quartic", "departure", "bounce", "blowup_curve", "rescaled")


@dataclass
class SelfCheck:
    """Результат одной самопроверки"""
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {"check": self.name, "passed": self.passed, "value": self.value,
                "tolerance": self.tolerance, "detail": self.detail}


def default_output_dir() -> str:
    return os.environ.get(OUTPUT_ENV, "output")


class BlowupLab:
    """
    Главный класс лаборатории.

    Основные возможности:
    - Профили U_n и их продолжение за световой конус
    - Спектры около U_0, U_n и статического решения
    - Эволюция и подгонки по ее результатам
    - Бисекции порога и самопроверка
    """

    def __init__(self, config: Optional[RunConfig] = None, output_dir: Optional[str] = None):
        """
        Args:
            config: Проверенная конфигурация запуска
            output_dir: Каталог артефактов (перекрывает config.output_dir)
        """
        self.config = config or RunConfig()
        LoggerSetup({**self.config.logging.model_dump(), "level": self.config.verbosity})
        self.logger = StructuredLogger("BlowupLab")
        self.consts = derive_constants(self.config.p)
        self.grid = RadialGrid(r_max=self.config.grid.r_max, N=self.config.grid.N)
        self.output_dir = Path(output_dir or self.config.output_dir)
        self.writer = ArtifactWriter(self.output_dir, self.config.provenance_lines())

    @property
    def tag(self) -> str:
        return f"p{self.consts.p}"

    # Профили

    def profile(self, n: Optional[int] = None, with_exterior: bool = True
                ) -> Tuple[SimilarityProfile, Optional[ExteriorBehavior]]:
        """
        Профиль U_n и таблицы `rho U Uprime` внутри и вне светового конуса.

        Raises:
            NotFound: Профиля с n узлами нет (при p=5 для n >= 1)
        """
        n = self.config.n if n is None else n
        profile = shoot_profile(self.consts, n, self.config.shooting)
        self.writer.write(f"profile_{self.tag}_n{n}.txt", profile.to_table())
        exterior = None
        if with_exterior and not profile.is_constant:
            try:
                exterior = continue_exterior(profile, controls=self.config.shooting)
            except LabError as e:
                self.logger.warning("Exterior continuation failed", n=n, error=e.message)
            else:
                self.writer.write(f"exterior_{self.tag}_n{n}.txt", exterior.to_table(self.consts.p, n))
        self.logger.info("Profile ready", p=self.consts.p, n=n, b_n=profile.b_n)
        return profile, exterior

    # Спектры

    def closed_form_spectrum(self, kmax: Optional[int] = None) -> List[Dict[str, Any]]:
        """Таблица `k lambda lambda_bar` около U_0"""
        kmax = self.config.spectrum.kmax if kmax is None else kmax
        pairs = u0_spectrum(self.consts, kmax)
        rows = [{"k": k, "lambda": pair.lam, "lambda_bar": pair.lam_bar} for k, pair in enumerate(pairs)]
        body = OutputFormatter.format_rows([[r["k"], r["lambda"], r["lambda_bar"]] for r in rows],
                                           header=["k", "lambda", "lambda_bar"])
        self.writer.write(f"u0_spectrum_{self.tag}.txt", body)
        return rows

    def numerical_spectrum(self, n: Optional[int] = None,
                           window: Optional[Tuple[float, float]] = None) -> List[EigenMode]:
        """Собственные значения квадратичной задачи около U_n и таблицы мод"""
        profile, _ = self.profile(n, with_exterior=False)
        modes = qep_spectrum(profile, window, self.config.spectrum)
        body = OutputFormatter.format_rows([[m.lam, m.branch.value, m.is_gauge] for m in modes],
                                           header=["lambda", "branch", "gauge"])
        self.writer.write(f"qep_spectrum_{self.tag}_n{profile.n}.txt", body)
        for index, mode in enumerate(modes):
            self.writer.write(f"qep_mode_{self.tag}_n{profile.n}_{index}.txt", mode.to_table())
        return modes

    def bound_state(self) -> StaticSolutionReport:
        """Связанное состояние статического решения (только p=5)"""
        if self.consts.p != 5:
            raise ConfigurationError("Статическое решение u_S существует только при p=5", {"p": self.consts.p})
        report = static_bound_state(self.config.bound_state)
        self.writer.write("bound_state_p5.txt", report.to_table())
        return report

    # Эволюция

    def family(self, **overrides) -> InitialDataFamily:
        config = self.config.family.model_copy(update=overrides) if overrides else self.config.family
        return InitialDataFamily.from_config(config, shooting=self.config.shooting,
                                             bound_state=self.config.bound_state)

    def evolve(self, amplitude: Optional[float] = None, label: str = "run") -> EvolutionOutcome:
        """Один запуск эволюции: трасса, снимки и итоговое состояние"""
        amplitude = self.config.family.amplitude if amplitude is None else amplitude
        initial = self.family().build(amplitude, self.grid, self.consts)
        outcome = evolve(initial, self.config.evolution, self.consts, run_id=label)
        self.writer.write(f"{label}_trace.txt", outcome.to_trace_table())
        self.writer.write(f"{label}_final.txt", outcome.final_state.to_table(self.consts.p))
        for index, state in enumerate(outcome.snapshots):
            self.writer.write(f"{label}_snapshot_{index:03d}.txt", state.to_table(self.consts.p))
        self.writer.write(f"{label}_summary.txt", OutputFormatter.format_key_value(outcome.summary()))
        return outcome

    # Подгонки

    def _load_states(self, paths: Sequence[str]) -> List[FieldState]:
        states = []
        for path in paths:
            state, p = FieldState.from_table(Path(path).read_text(encoding="utf-8"))
            if p != self.consts.p:
                raise ConfigurationError(f"Состояние {path} записано для p={p}", {"path": path, "p": p})
            states.append(state)
        return states

    def fit(self, model: str, traces: Sequence[str] = (), states: Sequence[str] = (),
            T: Optional[float] = None, lambda1: Optional[float] = None) -> List[FitReport]:
        """
        Подгонка по сохраненным трассам и состояниям.

        T, если не задано, берется из подгонки скорости по первой трассе.
        lambda1 для departure, если не задано, - наибольшее неградиентное
        собственное значение около U_n.
        """
        if model not in FIT_MODELS:
            raise ConfigurationError(f"Неизвестная модель подгонки '{model}', допустимы: {', '.join(FIT_MODELS)}",
                                     {"model": model})
        ctl = self.config.analysis
        loaded = [load_trace(path) for path in traces]
        snapshots = self._load_states(states)

        def blowup_time() -> float:
            if T is not None:
                return T
            if not loaded:
                raise ConfigurationError("Нужен --T или трасса для оценки T", {"model": model})
            return fit_blowup_rate(loaded[0], self.consts, ctl)["T"]

        reports: List[FitReport] = []
        if model == "rate":
            if not loaded:
                raise ConfigurationError("Для rate нужна трасса", {"model": model})
            reports = [fit_blowup_rate(trace, self.consts, ctl) for trace in loaded]
        elif model == "eigenmode":
            reports = [fit_eigenmode_expansion(snapshots, blowup_time(), self.consts, controls=ctl)]
        elif model in ("parabolic", "quartic"):
            T_fit = blowup_time()
            collapse = parabolic_collapse if model == "parabolic" else quartic_collapse
            report = collapse(snapshots, T_fit, self.consts, ctl)
            name, power = ("b", 2) if model == "parabolic" else ("d", 4)
            self.writer.write(f"collapse_{model}_{self.tag}.txt",
                              collapse_curve_table(snapshots, T_fit, self.consts, report[name], power, ctl))
            reports = [report]
        elif model == "departure":
            profile, _ = self.profile(with_exterior=False)
            if lambda1 is None:
                unstable = [m.lam for m in qep_spectrum(profile, controls=self.config.spectrum)
                            if m.lam > 0 and not m.is_gauge]
                if not unstable:
                    raise NotFound("Около U_n нет неустойчивой моды кроме калибровочной", {"n": profile.n})
                lambda1 = max(unstable)
            reports = critical_departure_fit(loaded, profile, lambda1, self.consts, ctl, T_seed=T)
        elif model == "bounce":
            rows = []
            for path, trace in zip(traces, loaded):
                t1, t2 = bounce_diagnostics(trace, ctl.smoothing_kernel)
                rows.append([path, t1, t2])
            self.writer.write(f"bounce_{self.tag}.txt", OutputFormatter.format_rows(rows, header=["trace", "t1", "t2"]))
            self.logger.info("Bounce diagnostics written", traces=len(rows))
            return []
        elif model == "blowup_curve":
            reports = [blowup_curve_fit(snapshots, self.consts)]
        else:
            T_fit = blowup_time()
            for index, state in enumerate(snapshots):
                table = rescaled_profile(state, T_fit, self.consts, ctl.rho_max, ctl.rho_samples)
                self.writer.write(f"rescaled_{self.tag}_{index:03d}.txt",
                                  OutputFormatter.format_rows(table.tolist(), header=["rho", "value"]))
            return []

        body = "\n".join(report.to_key_value() for report in reports)
        self.writer.write(f"fit_{model}_{self.tag}.txt", body)
        return reports

    # Бисекции

    def threshold(self, campaign_path: Optional[str] = None, jobs: Optional[int] = None):
        """
        Кампания бисекций: манифест YAML или одна запись из текущей конфигурации.
        """
        if campaign_path is not None:
            campaign = CampaignConfig.from_yaml(campaign_path)
        else:
            entry = CampaignEntry(name=self.config.family.kind, p=self.consts.p, family=self.config.family,
                                  bisection=self.config.bisection, evolution=self.config.evolution,
                                  grid=self.config.grid)
            campaign = CampaignConfig(entries=[entry])
        rows = run_campaign(campaign, jobs or self.config.jobs)
        self.writer.write("threshold_summary.txt", summary_table(rows))
        for row in rows:
            if row.record is not None:
                self.writer.write(f"bisection_{row.family}.txt", row.record.to_log())
                self.writer.write(f"probes_{row.family}.txt", row.record.probe_table())
        return rows

    # Самопроверка

    def selfcheck(self, quick: bool = False) -> List[SelfCheck]:
        """
        Набор проверок инвариантов; результат пишется в selfcheck.txt.

        quick оставляет только проверки, не требующие сканирования спектра и
        эволюции на нескольких сетках.
        """
        checks = [
            self._check_closed_form(),
            self._check_polynomials(),
            self._check_constant_profile(),
            self._check_static(),
            self._check_parabolic(),
            self._check_homogeneous_blowup(),
            self._check_rate_fit(),
        ]
        if not quick:
            checks += [
                self._check_kw_conservation(),
                self._check_no_excited_profile(),
                self._check_bound_state(),
                self._check_qep_closed_form(),
                self._check_energy_drift(),
                self._check_scaling_commutation(),
                self._check_convergence_order(),
            ]
        rows = [[c.name, c.passed, c.value, c.tolerance] for c in checks]
        self.writer.write("selfcheck.txt", OutputFormatter.format_rows(rows, header=["check", "passed", "value", "tolerance"]))
        self.logger.info("Selfcheck finished", passed=sum(c.passed for c in checks), total=len(checks))
        return checks

    def _check_closed_form(self) -> SelfCheck:
        worst = 0
        for p in (3, 5, 7):
            consts = derive_constants(p)
            for k, pair in enumerate(u0_spectrum(consts, 10)):
                expected = (Fraction(1 - 2 * k), Fraction(-2 * (p + 1), p - 1) - 2 * k)
                worst = max(worst, abs(pair.lam - expected[0]), abs(pair.lam_bar - expected[1]))
                for lam in pair:
                    u0_eigenfunction(consts, lam)
        return SelfCheck("closed_form_spectrum", worst == 0, float(worst), 0.0)

    def _check_polynomials(self) -> SelfCheck:
        expected = {
            (3, -1): [1, -1], (3, -3): [1, Fraction(-2, 3), Fraction(1, 5)],
            (5, -1): [1, Fraction(-2, 3)], (7, -1): [1, Fraction(-5, 9)],
        }
        worst = 0.0
        for (p, lam), coeffs in expected.items():
            mode = u0_eigenfunction(derive_constants(p), lam)
            worst = max(worst, max(abs(float(mode.coefficient(k)) - float(c)) for k, c in enumerate(coeffs)))
        return SelfCheck("eigen_polynomials", worst <= 1e-12, worst, 1e-12)

    def _check_constant_profile(self) -> SelfCheck:
        profile = shoot_profile(self.consts, 0, self.config.shooting)
        error = abs(profile.b_n / self.consts.a - 1.0)
        return SelfCheck("constant_profile", error <= 1e-8, error, 1e-8, f"b_0={profile.b_n:.12g}")

    def _check_static(self) -> SelfCheck:
        r = np.linspace(0.0, 20.0, 401)
        worst = float(max(np.max(np.abs(zero_mode_residual(r))), np.max(np.abs(static_residual(r)))))
        return SelfCheck("static_zero_mode", worst <= 1e-10, worst, 1e-10)

    def _check_parabolic(self) -> SelfCheck:
        z = np.linspace(0.0, 3.0, 61)
        worst = float(np.max(np.abs(parabolic_ode_residual(z, 0.7, self.consts))))
        return SelfCheck("parabolic_profile_ode", worst <= 1e-10, worst, 1e-10)

    def _check_homogeneous_blowup(self) -> SelfCheck:
        grid = RadialGrid(r_max=4.0, N=64)
        controls = self.config.evolution.model_copy(update={"t_max": 2.0, "boundary": "isolated",
                                                            "snapshot_times": [], "snapshot_amplitudes": []})
        outcome = evolve(homogeneous_data(self.consts, 1.0, grid), controls, self.consts, run_id="selfcheck")
        error = abs(outcome.T_est - 1.0) if outcome.T_est is not None else float("inf")
        return SelfCheck("homogeneous_blowup_time", error <= 1e-3, error, 1e-3, outcome.verdict.value)

    def _check_rate_fit(self) -> SelfCheck:
        T = 2.0
        t = T - np.geomspace(1.0, 1e-9, 600)
        u = self.consts.a * (T - t) ** (-self.consts.alpha_f)
        report = fit_blowup_rate(np.column_stack((t, u)), self.consts, self.config.analysis)
        error = abs(report["T"] - T)
        return SelfCheck("synthetic_rate_fit", error <= 1e-6, error, 1e-6)


    def _check_kw_conservation(self) -> SelfCheck:
        shooter = ProfileShooter(derive_constants(5), self.config.shooting)
        worst = max(shooter.kw_drift(b) for b in (0.3, 0.6, 0.9))
        return SelfCheck("kw_conservation_p5", worst <= 1e-9, worst, 1e-9)

    def _check_no_excited_profile(self) -> SelfCheck:
        try:
            shoot_profile(derive_constants(5), 1, self.config.shooting)
        except NotFound:
            return SelfCheck("p5_excited_profile_absent", True, 0.0, 0.0)
        return SelfCheck("p5_excited_profile_absent", False, 1.0, 0.0, "U_1 found at p=5")

    def _check_bound_state(self) -> SelfCheck:
        report = static_bound_state(self.config.bound_state)
        passed = 1.05 <= report.lambda1 <= 1.15 and report.bound_states == 1
        return SelfCheck("static_bound_state", passed, report.lambda1, 0.05, f"bound_states={report.bound_states}")

    def _check_qep_closed_form(self) -> SelfCheck:
        # при p=7 все корни в окне простые
        consts = derive_constants(7)
        window = (-3.5, 1.5)
        modes = qep_spectrum(SimilarityProfile.constant(consts), window, self.config.spectrum)
        expected = sorted({float(lam) for pair in u0_spectrum(consts, 5) for lam in pair
                           if window[0] <= lam <= window[1]}, reverse=True)
        found = sorted((mode.lam for mode in modes), reverse=True)
        if len(found) != len(expected):
            return SelfCheck("qep_constant_profile_p7", False, float("inf"), 1e-6,
                             f"found {len(found)} of {len(expected)}")
        worst = float(np.max(np.abs(np.array(found) - np.array(expected))))
        return SelfCheck("qep_constant_profile_p7", worst <= 1e-6, worst, 1e-6)

    def _check_energy_drift(self) -> SelfCheck:
        grid = RadialGrid(r_max=16.0, N=4096)
        controls = self.config.evolution.model_copy(update={"t_max": 3.0, "boundary": "isolated",
                                                            "snapshot_times": [], "snapshot_amplitudes": []})
        outcome = evolve(gauss4_data(0.05, 1.0, 2.0, grid), controls, self.consts, run_id="selfcheck")
        drift = energy_drift(outcome)
        return SelfCheck("energy_drift", drift <= 1e-6, drift, 1e-6, outcome.verdict.value)

    def _check_scaling_commutation(self) -> SelfCheck:
        state = gauss4_data(0.5, 1.0, 2.0, RadialGrid(r_max=8.0, N=256))
        worst = max(scaling_commutator(state, L, 0.25 * state.grid.h, self.consts) for L in (0.5, 2.0, 3.0))
        return SelfCheck("scaling_commutes_with_step", worst <= 1e-12, worst, 1e-12)

    def _check_convergence_order(self) -> SelfCheck:
        order = self_convergence_order(lambda grid: gauss4_data(0.5, 1.0, 0.0, grid),
                                       r_max=8.0, N=256, t_end=1.0, consts=self.consts)
        return SelfCheck("self_convergence_order", order >= 3.8, order, 3.8)
