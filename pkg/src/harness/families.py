"""
Однопараметрические семейства начальных данных.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

from ..config.lab_config import BoundStateControls, FamilyConfig, ShootingControls
from ..core.constants import ModelConstants
from ..core.errors import ConfigurationError
from ..core.grid import FieldState, RadialGrid
from ..evolve.initial_data import custom_table_data, gauss4_data, mode_perturbed_static_data, selfsim_snapshot
from ..profiles.shooting import SimilarityProfile, shoot_profile
from ..spectrum.static import StaticSolutionReport, static_bound_state


class FamilyKind(Enum):
    """Тип семейства"""
    GAUSS4 = "gauss4"
    MODE_PERTURBED_STATIC = "mode_perturbed_static"
    SELFSIM_SEED = "selfsim_seed"
    CUSTOM_TABLE = "custom_table"


@dataclass
class InitialDataFamily:
    """
    Семейство данных с одним настраиваемым параметром.

    Большее значение параметра соответствует более сильным данным. Для
    mode_perturbed_static параметр - epsilon, для selfsim_seed и custom_table -
    множитель при (u, u_t).

    Attributes:
        kind: Тип семейства
        name: Имя для отчетов
        sigma: Ширина gauss4
        R: Центр gauss4
        profile_n: Индекс профиля U_n для selfsim_seed
        blowup_time: T автомодельного решения для selfsim_seed
        table_path: Путь к таблице состояния для custom_table
    """
    kind: FamilyKind
    name: str = ""
    sigma: float = 1.0
    R: float = 2.0
    profile_n: int = 1
    blowup_time: float = 1.0
    table_path: Optional[str] = None
    shooting: Optional[ShootingControls] = None
    bound_state: Optional[BoundStateControls] = None
    profile: Optional[SimilarityProfile] = field(default=None, repr=False)
    static_report: Optional[StaticSolutionReport] = field(default=None, repr=False)

    def __post_init__(self):
        if not self.name:
            self.name = self.kind.value

    @classmethod
    def from_config(cls, config: FamilyConfig, name: str = "", **handles) -> "InitialDataFamily":
        """Создание семейства из FamilyConfig"""
        return cls(
            kind=FamilyKind(config.kind),
            name=name,
            sigma=config.sigma,
            R=config.R,
            profile_n=config.profile_n,
            blowup_time=config.blowup_time,
            table_path=config.table_path,
            **handles,
        )

    def build(self, amplitude: float, grid: RadialGrid, consts: ModelConstants) -> FieldState:
        """
        Начальное состояние для заданного значения параметра.

        Raises:
            ConfigurationError: Семейство несовместимо с p
        """
        if self.kind is FamilyKind.GAUSS4:
            return gauss4_data(amplitude, self.sigma, self.R, grid)
        if self.kind is FamilyKind.MODE_PERTURBED_STATIC:
            if consts.p != 5:
                raise ConfigurationError("mode_perturbed_static определено только для p=5", {"p": consts.p})
            if self.static_report is None:
                self.static_report = static_bound_state(self.bound_state)
            return mode_perturbed_static_data(amplitude, grid, self.static_report)
        if self.kind is FamilyKind.SELFSIM_SEED:
            if self.profile is None or self.profile.consts.p != consts.p:
                self.profile = shoot_profile(consts, self.profile_n, self.shooting)
            seed = selfsim_snapshot(self.profile, self.blowup_time, 0.0, grid)
            return FieldState(grid=grid, t=seed.t, u=amplitude * seed.u, v=amplitude * seed.v)
        state = custom_table_data(self.table_path, consts, grid)
        return FieldState(grid=grid, t=state.t, u=amplitude * state.u, v=amplitude * state.v)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value, "name": self.name}
        if self.kind is FamilyKind.GAUSS4:
            data.update(sigma=self.sigma, R=self.R)
        elif self.kind is FamilyKind.SELFSIM_SEED:
            data.update(profile_n=self.profile_n, blowup_time=self.blowup_time)
        elif self.kind is FamilyKind.CUSTOM_TABLE:
            data.update(table_path=self.table_path)
        return data
