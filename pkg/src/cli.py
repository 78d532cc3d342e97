"""
CLI интерфейс лаборатории.

Результаты печатаются в stdout и пишутся в каталог вывода; логи идут в stderr.
Коды завершения: 0 успех, 2 ошибка конфигурации, 3 численный сбой,
4 неопределенный вердикт.
"""
from typing import Any, Dict, List, Optional

import typer
from rich.console import Console
from rich.panel import Panel

from .config.lab_config import RunConfig
from .core.errors import LabError, NumericalError
from .main import FIT_MODELS, BlowupLab, default_output_dir
from .utils.formatter import OutputFormatter

console = Console()
err_console = Console(stderr=True)
app = typer.Typer(
    name="blowup-lab",
    help="Численная лаборатория разрушения решений полулинейного волнового уравнения",
    add_completion=False,
    rich_markup_mode="rich",
)

# Глобальные опции
current_options: Dict[str, Any] = {
    "config": None,
    "output": None,
    "verbosity": None,
    "jobs": None,
}


def _fail(error: LabError):
    err_console.print(Panel(
        f"[red]{type(error).__name__}:[/red] {error.message}",
        title="[red]Ошибка[/red]",
        border_style="red",
    ))
    raise typer.Exit(error.exit_code)


def get_lab(overrides: Dict[str, Any]) -> BlowupLab:
    """Лаборатория с конфигурацией из файла и флагов (флаги побеждают)"""
    flat = dict(overrides)
    if current_options["verbosity"] is not None:
        flat["verbosity"] = current_options["verbosity"]
    if current_options["jobs"] is not None:
        flat["jobs"] = current_options["jobs"]
    output = current_options["output"]
    if output is None and current_options["config"] is None:
        output = default_output_dir()
    if output is not None:
        flat["output_dir"] = output
    config = RunConfig.from_file(current_options["config"], flat)
    return BlowupLab(config)


def run_guarded(action):
    """Выполнение команды с отображением LabError в код завершения"""
    try:
        return action()
    except LabError as e:
        _fail(e)


@app.callback()
def main_options(
    config: Optional[str] = typer.Option(None, "--config", "-c", help="Файл конфигурации `key = value`"),
    output: Optional[str] = typer.Option(None, "--output", "-o", help="Каталог артефактов"),
    verbosity: Optional[str] = typer.Option(None, "--verbosity", "-v", help="DEBUG, INFO, WARNING, ERROR"),
    jobs: Optional[int] = typer.Option(None, "--jobs", "-j", help="Число параллельных проб"),
):
    """Глобальные опции"""
    current_options.update(config=config, output=output, verbosity=verbosity, jobs=jobs)


@app.command()
def profile(
    p: Optional[int] = typer.Option(None, "--p", help="Показатель нелинейности"),
    n: Optional[int] = typer.Option(None, "--n", help="Число узлов профиля"),
    exterior: bool = typer.Option(True, "--exterior/--no-exterior", help="Продолжение за световой конус"),
):
    """Найти автомодельный профиль U_n стрельбой."""
    def action():
        lab = get_lab({"p": p, "n": n})
        shot, ext = lab.profile(with_exterior=exterior)
        rows = [{"p": lab.consts.p, "n": shot.n, "b_n": shot.b_n, "U(0)": float(shot.U[0]),
                 "center_residual": shot.center_residual}]
        if ext is not None:
            rows[0]["exterior"] = ext.kind.value
            rows[0]["rho_0"] = ext.rho_0
            rows[0]["decay_exponent"] = ext.decay_exponent
        console.print(OutputFormatter.rich_table("Автомодельный профиль", rows))
    run_guarded(action)


@app.command()
def spectrum(
    p: Optional[int] = typer.Option(None, "--p", help="Показатель нелинейности"),
    kmax: Optional[int] = typer.Option(None, "--kmax", help="Наибольший k замкнутого спектра"),
    n: Optional[int] = typer.Option(None, "--n", help="Профиль U_n для численного спектра"),
    qep: bool = typer.Option(False, "--qep/--no-qep", help="Численный спектр около U_n"),
    lo: Optional[float] = typer.Option(None, "--lo", help="Нижняя граница окна по lambda"),
    hi: Optional[float] = typer.Option(None, "--hi", help="Верхняя граница окна по lambda"),
    bound_state: bool = typer.Option(False, "--bound-state", help="Связанное состояние u_S (p=5)"),
):
    """Спектры линейной устойчивости."""
    def action():
        lab = get_lab({"p": p, "n": n, "spectrum.kmax": kmax, "spectrum.window_lo": lo, "spectrum.window_hi": hi})
        console.print(OutputFormatter.rich_table(f"Спектр около U_0, p={lab.consts.p}", lab.closed_form_spectrum()))
        if qep:
            modes = lab.numerical_spectrum()
            rows = [{"lambda": m.lam, "branch": m.branch.value, "gauge": m.is_gauge} for m in modes]
            console.print(OutputFormatter.rich_table(f"Спектр около U_{lab.config.n}", rows))
        if bound_state:
            report = lab.bound_state()
            console.print(OutputFormatter.rich_table("Связанное состояние u_S", [
                {"lambda1": report.lambda1, "k2": report.k2, "bound_states": report.bound_states,
                 "zero_mode_residual": report.zero_mode_residual}]))
    run_guarded(action)


@app.command()
def evolve(
    p: Optional[int] = typer.Option(None, "--p", help="Показатель нелинейности"),
    family: Optional[str] = typer.Option(None, "--family", help="gauss4, mode_perturbed_static, selfsim_seed, custom_table"),
    amplitude: Optional[float] = typer.Option(None, "--A", help="Параметр семейства"),
    t_max: Optional[float] = typer.Option(None, "--t-max", help="Предельное время"),
    cells: Optional[int] = typer.Option(None, "--N", help="Число ячеек сетки"),
    r_max: Optional[float] = typer.Option(None, "--r-max", help="Внешняя граница"),
    boundary: Optional[str] = typer.Option(None, "--boundary", help="isolated или sommerfeld"),
    label: str = typer.Option("run", "--label", help="Префикс файлов"),
):
    """Один запуск эволюции с трассой и снимками."""
    def action():
        lab = get_lab({"p": p, "family.kind": family, "family.amplitude": amplitude, "evolution.t_max": t_max,
                       "grid.N": cells, "grid.r_max": r_max, "evolution.boundary": boundary})
        outcome = lab.evolve(label=label)
        console.print(OutputFormatter.rich_table("Эволюция", [outcome.summary()]))
    run_guarded(action)


@app.command()
def fit(
    model: str = typer.Argument(..., help=", ".join(FIT_MODELS)),
    p: Optional[int] = typer.Option(None, "--p", help="Показатель нелинейности"),
    n: Optional[int] = typer.Option(None, "--n", help="Профиль U_n для departure"),
    trace: List[str] = typer.Option([], "--trace", help="Файл трассы (можно повторять)"),
    state: List[str] = typer.Option([], "--state", help="Файл состояния (можно повторять)"),
    blowup_time: Optional[float] = typer.Option(None, "--T", help="Время разрушения"),
    lambda1: Optional[float] = typer.Option(None, "--lambda1", help="Неустойчивое собственное значение"),
):
    """Подгонки по сохраненным трассам и состояниям."""
    def action():
        lab = get_lab({"p": p, "n": n})
        reports = lab.fit(model, trace, state, blowup_time, lambda1)
        if reports:
            rows = [{"model": r.model.value, "residual": r.residual, **r.params} for r in reports]
            console.print(OutputFormatter.rich_table("Подгонка", rows))
        else:
            console.print(f"Таблицы записаны в {lab.output_dir}")
    run_guarded(action)


@app.command()
def threshold(
    campaign: Optional[str] = typer.Option(None, "--campaign", help="YAML манифест кампании"),
    p: Optional[int] = typer.Option(None, "--p", help="Показатель нелинейности"),
    family: Optional[str] = typer.Option(None, "--family", help="Семейство данных"),
    lo: Optional[float] = typer.Option(None, "--lo", help="Нижняя граница скобки"),
    hi: Optional[float] = typer.Option(None, "--hi", help="Верхняя граница скобки"),
    depth: Optional[int] = typer.Option(None, "--depth", help="Глубина бисекции"),
    target: Optional[str] = typer.Option(None, "--target", help="A_star, A_0 или b_zero"),
):
    """Бисекция порога разрушения."""
    def action():
        lab = get_lab({"p": p, "family.kind": family, "bisection.lo": lo, "bisection.hi": hi,
                       "bisection.depth": depth, "bisection.target": target})
        rows = lab.threshold(campaign)
        console.print(OutputFormatter.rich_table("Пороги", [
            {"family": r.family, "A_star_lo": r.A_star_lo, "A_star_hi": r.A_star_hi, "A_0": r.A_0,
             "branch": r.branch, "status": r.status} for r in rows]))
        if any(r.status == "inconclusive" for r in rows):
            raise typer.Exit(4)
        if any(r.status != "ok" for r in rows):
            raise typer.Exit(NumericalError.exit_code)
    run_guarded(action)


@app.command()
def selfcheck(
    p: Optional[int] = typer.Option(None, "--p", help="Показатель нелинейности"),
    quick: bool = typer.Option(False, "--quick", help="Только быстрые проверки"),
):
    """Набор проверок инвариантов."""
    def action():
        lab = get_lab({"p": p})
        checks = lab.selfcheck(quick=quick)
        console.print(OutputFormatter.rich_table("Самопроверка", [c.to_dict() for c in checks]))
        if not all(c.passed for c in checks):
            raise typer.Exit(NumericalError.exit_code)
    run_guarded(action)


def main():
    """Главная точка входа для CLI."""
    app()


if __name__ == "__main__":
    main()
