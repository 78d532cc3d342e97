"""
Конфигурация запусков лаборатории
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..core.errors import ConfigurationError
from ..utils.validator import ConfigValidator


class _Controls(BaseModel):
    """Базовая модель: неизменяемая, неизвестные ключи запрещены"""

    model_config = ConfigDict(extra="forbid", frozen=True)


class GridConfig(_Controls):
    """Параметры радиальной сетки"""

    N: int = Field(default=4096, ge=16, description="Число ячеек")
    r_max: float = Field(default=16.0, gt=0.0, description="Внешняя граница")


class ShootingControls(_Controls):
    """Параметры стрельбы для автомодельных профилей"""

    eps_lightcone: float = Field(default=1e-6, gt=0.0, le=1e-2, description="Отступ от rho=1")
    eps_center: float = Field(default=1e-4, gt=0.0, le=1e-2, description="Точка прицеливания у rho=0")
    rtol: float = Field(default=1e-12, gt=0.0, le=1e-4, description="Относительная точность интегратора")
    atol: float = Field(default=1e-14, gt=0.0, le=1e-4, description="Абсолютная точность интегратора")
    b_window_factor: float = Field(default=10.0, gt=0.0, description="Окно поиска b в (0, factor*a]")
    b_scan_points: int = Field(default=400, ge=10, description="Число точек сканирования по b")
    tol: float = Field(default=1e-12, gt=0.0, le=1e-4, description="Точность уточнения b")
    max_iter: int = Field(default=200, ge=10, description="Предел итераций уточнения")
    divergence_threshold: float = Field(default=1e6, gt=1.0, description="Порог расходимости |U|")
    sample_spacing: float = Field(default=1e-3, gt=0.0, le=0.05, description="Шаг таблицы профиля")
    rho_max: float = Field(default=50.0, gt=1.0, description="Предел продолжения за световой конус")
    pole_fit_samples: int = Field(default=50, ge=5, description="Точек для подгонки полюса")
    decay_fit_tolerance: float = Field(default=0.05, gt=0.0, description="Допуск степенного закона")


class SpectrumControls(_Controls):
    """Параметры поиска спектра квадратичной задачи на собственные значения"""

    window_lo: float = Field(default=-5.0, description="Нижняя граница окна по lambda")
    window_hi: float = Field(default=2.0, description="Верхняя граница окна по lambda")
    points_per_unit: int = Field(default=200, ge=4, description="Точек сканирования на единицу lambda")
    root_tol: float = Field(default=1e-10, gt=0.0, le=1e-6, description="Точность уточнения корня")
    eps_center: float = Field(default=1e-4, gt=0.0, le=1e-2, description="Старт регулярного ряда у rho=0")
    match_point: float = Field(default=0.5, gt=0.05, lt=0.95, description="Точка сшивки")
    series_order: int = Field(default=40, ge=8, le=200, description="Порядок ряда у rho=1")
    series_standoff: float = Field(default=0.1, gt=0.0, le=0.3, description="Отступ ряда от rho=1")
    rtol: float = Field(default=1e-12, gt=0.0, le=1e-4, description="Относительная точность интегратора")
    atol: float = Field(default=1e-14, gt=0.0, le=1e-4, description="Абсолютная точность интегратора")
    sample_spacing: float = Field(default=1e-3, gt=0.0, le=0.05, description="Шаг таблицы моды")
    kmax: int = Field(default=3, ge=0, le=200, description="Число членов замкнутого спектра")

    @model_validator(mode="after")
    def check_window(self):
        if not self.window_lo < self.window_hi:
            raise ValueError("window_lo должен быть меньше window_hi")
        return self


class BoundStateControls(_Controls):
    """Параметры задачи о связанном состоянии статического решения"""

    r_match: float = Field(default=30.0, gt=5.0, description="Радиус сшивки с хвостом")
    r_start: float = Field(default=1e-3, gt=0.0, le=0.1, description="Старт регулярного ряда")
    join_radius: float = Field(default=4.0, gt=0.5, description="Радиус склейки собственной функции")
    k2_scan_points: int = Field(default=200, ge=10, description="Точек сканирования по k^2")
    k2_upper: float = Field(default=-1e-3, lt=0.0, description="Верхняя граница окна k^2")
    rtol: float = Field(default=1e-12, gt=0.0, le=1e-4, description="Относительная точность интегратора")
    atol: float = Field(default=1e-14, gt=0.0, le=1e-4, description="Абсолютная точность интегратора")
    root_tol: float = Field(default=1e-13, gt=0.0, le=1e-6, description="Точность уточнения k^2")
    sample_spacing: float = Field(default=0.01, gt=0.0, le=0.5, description="Шаг таблицы v1")


class EvolutionControls(_Controls):
    """Параметры эволюции методом прямых"""

    cfl: float = Field(default=0.25, gt=0.0, le=1.0, description="Шаг по времени в долях h")
    u_stop: float = Field(default=1e7, gt=0.0, description="Порог объявления разрушения")
    disp_floor: Optional[float] = Field(default=None, gt=0.0, description="Порог рассеяния")
    disp_window: Optional[float] = Field(default=None, gt=0.0, description="Время ниже порога рассеяния")
    t_max: float = Field(default=50.0, gt=0.0, description="Предельное координатное время")
    snapshot_times: List[float] = Field(default_factory=list, description="Моменты сохранения состояний")
    snapshot_amplitudes: List[float] = Field(default_factory=list, description="Уровни max|u| для снимков")
    trace_stride: int = Field(default=1, ge=1, description="Шаг записи трасс")
    boundary: Literal["isolated", "sommerfeld"] = Field(default="isolated", description="Внешнее граничное условие")
    safety: float = Field(default=0.1, gt=0.0, le=1.0, description="Коэффициент шага при коллапсе")
    collapse_threshold: float = Field(default=1e2, gt=0.0, description="max|u|, после которого шаг сжимается")
    diagnostic_radius: Optional[float] = Field(default=None, gt=0.0, description="Радиус диагностической области")
    max_steps: int = Field(default=5_000_000, ge=1, description="Предел числа шагов")
    max_refinements: int = Field(default=8, ge=0, description="Дроблений шага после нечисловых значений")

    @field_validator("snapshot_times", "snapshot_amplitudes")
    @classmethod
    def check_positive(cls, values: List[float]) -> List[float]:
        if any(value < 0 for value in values):
            raise ValueError("значения должны быть неотрицательными")
        return sorted(values)

    @model_validator(mode="after")
    def check_thresholds(self):
        if self.disp_floor is not None and not self.u_stop > 1e3 * self.disp_floor:
            raise ValueError("требуется u_stop > 1e3 * disp_floor")
        return self

    def with_horizon(self, factor: float) -> "EvolutionControls":
        """Копия с t_max, умноженным на factor"""
        return self.model_copy(update={"t_max": self.t_max * factor})


class FamilyConfig(_Controls):
    """Однопараметрическое семейство начальных данных"""

    kind: Literal["gauss4", "mode_perturbed_static", "selfsim_seed", "custom_table"] = Field(
        default="gauss4", description="Тип семейства"
    )
    amplitude: float = Field(default=1.0, description="Настраиваемый параметр (A или epsilon)")
    sigma: float = Field(default=1.0, gt=0.0, description="Ширина gauss4")
    R: float = Field(default=2.0, ge=0.0, description="Центр gauss4")
    profile_n: int = Field(default=1, ge=0, description="Индекс профиля для selfsim_seed")
    blowup_time: float = Field(default=1.0, gt=0.0, description="T для selfsim_seed")
    table_path: Optional[str] = Field(default=None, description="Файл таблицы для custom_table")

    @model_validator(mode="after")
    def check_table(self):
        if self.kind == "custom_table" and not self.table_path:
            raise ValueError("для custom_table требуется table_path")
        return self


class AnalysisControls(_Controls):
    """Параметры подгонок"""

    rate_tolerance: float = Field(default=0.01, gt=0.0, description="Допуск невязки двучленной модели")
    amplitude_tolerance: float = Field(default=0.02, gt=0.0, description="Допуск отклонения от a")
    min_window_samples: int = Field(default=8, ge=3, description="Минимум точек в окне")
    z_max: float = Field(default=3.0, gt=0.0, description="Окно по z для коллапсов")
    collapse_threshold: float = Field(default=0.03, gt=0.0, description="Порог невязки параболического коллапса")
    quartic_threshold: float = Field(default=0.05, gt=0.0, description="Порог невязки квартичного коллапса")
    rho_max: float = Field(default=1.0, gt=0.0, description="Окно по rho")
    rho_samples: int = Field(default=101, ge=5, description="Точек по rho")
    z_samples: int = Field(default=121, ge=5, description="Точек по z")
    smoothing_kernel: int = Field(default=5, ge=1, description="Окно медианного сглаживания")
    departure_band: float = Field(default=0.3, gt=0.0, lt=1.0, description="Линейный режим отхода")
    T_search_factor: float = Field(default=2.0, gt=1.0, description="Интервал поиска T")

    @field_validator("smoothing_kernel")
    @classmethod
    def check_odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("окно сглаживания должно быть нечетным")
        return value


class BisectionControls(_Controls):
    """Параметры бисекции"""

    target: Literal["A_star", "A_0", "b_zero"] = Field(default="A_star", description="Цель бисекции")
    lo: float = Field(default=0.0, description="Нижняя граница скобки")
    hi: float = Field(default=1.0, description="Верхняя граница скобки")
    depth: int = Field(default=40, ge=1, le=60, description="Глубина бисекции")
    horizon_growth: float = Field(default=1.5, ge=1.0, description="Рост t_max")
    growth_every: int = Field(default=10, ge=1, description="Каждые сколько уровней растет t_max")
    min_relative_width: float = Field(default=1e-13, gt=0.0, description="Предел относительной ширины")

    @model_validator(mode="after")
    def check_bracket(self):
        if not self.lo < self.hi:
            raise ValueError("требуется lo < hi")
        return self


class LoggingConfig(_Controls):
    """Конфигурация логирования"""

    level: str = Field(default="INFO", pattern="^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$", description="Уровень логирования")
    log_file: Optional[str] = Field(default=None, description="Файл логов")
    error_file: Optional[str] = Field(default=None, description="Файл ошибок")
    max_file_size: str = Field(default="10 MB", description="Максимальный размер файла лога")
    retention_days: int = Field(default=7, ge=1, description="Количество дней хранения логов")
    compression: bool = Field(default=True, description="Сжимать ли старые логи")


class RunConfig(_Controls):
    """Полная конфигурация запуска"""

    p: int = Field(default=3, ge=3, description="Показатель нелинейности (нечетный)")
    n: int = Field(default=0, ge=0, description="Индекс профиля")
    output_dir: str = Field(default="output", description="Каталог артефактов")
    verbosity: str = Field(default="INFO", pattern="^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$", description="Уровень вывода")
    jobs: int = Field(default=1, ge=1, le=256, description="Число параллельных проб")
    grid: GridConfig = Field(default_factory=GridConfig)
    shooting: ShootingControls = Field(default_factory=ShootingControls)
    spectrum: SpectrumControls = Field(default_factory=SpectrumControls)
    bound_state: BoundStateControls = Field(default_factory=BoundStateControls)
    evolution: EvolutionControls = Field(default_factory=EvolutionControls)
    family: FamilyConfig = Field(default_factory=FamilyConfig)
    analysis: AnalysisControls = Field(default_factory=AnalysisControls)
    bisection: BisectionControls = Field(default_factory=BisectionControls)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @field_validator("p")
    @classmethod
    def validate_p(cls, v):
        """Показатель должен быть нечетным"""
        if v % 2 == 0:
            raise ValueError("p должен быть нечетным")
        return v

    @classmethod
    def from_mapping(cls, flat: Dict[str, Any]) -> "RunConfig":
        """
        Построение конфигурации из плоского словаря с ключами через точку.

        Raises:
            ConfigurationError: Если ключ неизвестен или значение вне диапазона
        """
        try:
            return cls.model_validate(ConfigValidator.nest_dotted_keys(flat))
        except ValidationError as e:
            raise ConfigurationError(
                ConfigValidator.describe_validation_error(e),
                {"errors": [err["loc"] for err in e.errors()]},
            ) from e

    @classmethod
    def from_file(cls, config_path: Optional[str] = None,
                  overrides: Optional[Dict[str, Any]] = None) -> "RunConfig":
        """
        Загрузка конфигурации из файла `key = value` с переопределениями флагов.

        Args:
            config_path: Путь к файлу (None - только значения по умолчанию)
            overrides: Значения флагов командной строки (побеждают файл)

        Returns:
            Проверенная конфигурация
        """
        flat: Dict[str, Any] = {}
        if config_path is not None:
            path = Path(config_path)
            if not path.exists():
                raise ConfigurationError(f"Файл конфигурации не найден: {path}", {"path": str(path)})
            flat.update(ConfigValidator.parse_key_value_text(path.read_text(encoding="utf-8")))
        for key, value in (overrides or {}).items():
            if value is not None:
                flat[key] = value
        return cls.from_mapping(flat)

    def provenance_lines(self) -> List[str]:
        """Полная эффективная конфигурация в виде отсортированных строк `key = value`"""
        flat = ConfigValidator.flatten(self.model_dump(mode="json"))
        return [f"{key} = {json.dumps(flat[key])}" for key in sorted(flat)]


class CampaignEntry(_Controls):
    """Одна бисекция в кампании"""

    name: str = Field(..., description="Имя записи")
    p: int = Field(default=3, ge=3, description="Показатель нелинейности")
    family: FamilyConfig = Field(default_factory=FamilyConfig)
    bisection: BisectionControls = Field(default_factory=BisectionControls)
    evolution: EvolutionControls = Field(default_factory=EvolutionControls)
    grid: GridConfig = Field(default_factory=GridConfig)

    @field_validator("p")
    @classmethod
    def validate_p(cls, v):
        if v % 2 == 0:
            raise ValueError("p должен быть нечетным")
        return v


class CampaignConfig(_Controls):
    """Манифест кампании бисекций"""

    entries: List[CampaignEntry] = Field(default_factory=list, description="Записи кампании")

    @classmethod
    def from_yaml(cls, config_path: str) -> "CampaignConfig":
        """Загрузка манифеста из YAML файла"""
        path = Path(config_path)
        if not path.exists():
            raise ConfigurationError(f"Файл манифеста не найден: {path}", {"path": str(path)})
        data = ConfigValidator.load_yaml(path)
        if "campaign" not in data:
            raise ConfigurationError("Отсутствует секция 'campaign' в манифесте", {"path": str(path)})
        try:
            return cls(entries=data["campaign"] or [])
        except ValidationError as e:
            raise ConfigurationError(ConfigValidator.describe_validation_error(e)) from e
