"""
Радиальная сетка и состояние поля (u, u_t) на ней.
"""
import re
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .errors import InvalidGrid, InvalidState

MIN_CELLS = 16

_HEADER_RE = re.compile(
    r"#\s*p=(?P<p>-?\d+)\s+t=(?P<t>\S+)\s+N=(?P<N>\d+)\s+r_max=(?P<r_max>\S+)"
)


@dataclass(frozen=True)
class RadialGrid:
    """Равномерная сетка r_j = j*h, j = 0..N"""
    r_max: float
    N: int

    def __post_init__(self):
        if not np.isfinite(self.r_max) or self.r_max <= 0:
            raise InvalidGrid(f"r_max должен быть положительным, получено {self.r_max}",
                              {"r_max": self.r_max, "valid": "> 0"})
        if int(self.N) != self.N or self.N < MIN_CELLS:
            raise InvalidGrid(f"N должно быть целым >= {MIN_CELLS}, получено {self.N}",
                              {"N": self.N, "valid": f">= {MIN_CELLS}"})

    @property
    def h(self) -> float:
        return self.r_max / self.N

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.N + 1) * self.h

    def scaled(self, L: float) -> "RadialGrid":
        """Сетка с r_max -> L*r_max и тем же числом ячеек"""
        return RadialGrid(r_max=L * self.r_max, N=self.N)

    def refined(self) -> "RadialGrid":
        return RadialGrid(r_max=self.r_max, N=2 * self.N)

    def enlarged(self) -> "RadialGrid":
        """Удвоенная область при неизменном шаге"""
        return RadialGrid(r_max=2 * self.r_max, N=2 * self.N)


def _frozen(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class FieldState:
    """
    Состояние поля в момент t.

    Attributes:
        grid: Радиальная сетка
        t: Координатное время
        u: Амплитуда поля в узлах
        v: Скорость поля u_t в узлах
    """
    grid: RadialGrid
    t: float
    u: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)

    def __post_init__(self):
        u = _frozen(self.u)
        v = _frozen(self.v)
        size = self.grid.N + 1
        if u.shape != (size,) or v.shape != (size,):
            raise InvalidState(
                f"Длина массивов должна быть N+1={size}",
                {"u_shape": u.shape, "v_shape": v.shape},
            )
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise InvalidState("Состояние содержит нечисловые значения")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def zeros(cls, grid: RadialGrid, t: float = 0.0) -> "FieldState":
        return cls(grid=grid, t=t, u=np.zeros(grid.N + 1), v=np.zeros(grid.N + 1))

    @property
    def max_abs_u(self) -> float:
        return float(np.max(np.abs(self.u)))

    def time_reversed(self) -> "FieldState":
        """Состояние с v -> -v"""
        return FieldState(grid=self.grid, t=self.t, u=self.u, v=-self.v)

    def to_table(self, p: int) -> str:
        """Сериализация в текстовую таблицу `r u v`"""
        lines = [f"# p={p} t={self.t:.17g} N={self.grid.N} r_max={self.grid.r_max:.17g}"]
        for r, u, v in zip(self.grid.nodes, self.u, self.v):
            lines.append(f"{r:.17g} {u:.17g} {v:.17g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_table(cls, text: str) -> Tuple["FieldState", int]:
        """
        Разбор текстовой таблицы состояния.

        Args:
            text: Содержимое файла; строки провенанса (#) перед заголовком допускаются

        Returns:
            Кортеж (состояние, p)

        Raises:
            InvalidState: Если заголовок не найден или таблица повреждена
        """
        header = None
        rows = []
        for line in text.splitlines():
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                match = _HEADER_RE.match(stripped)
                if match:
                    header = match
                continue
            rows.append([float(x) for x in stripped.split()])

        if header is None:
            raise InvalidState("В таблице нет заголовка `# p=.. t=.. N=.. r_max=..`")

        grid = RadialGrid(r_max=float(header["r_max"]), N=int(header["N"]))
        data = np.array(rows, dtype=float)
        if data.ndim != 2 or data.shape != (grid.N + 1, 3):
            raise InvalidState(
                "Число строк таблицы не совпадает с N+1",
                {"rows": len(rows), "expected": grid.N + 1},
            )
        state = cls(grid=grid, t=float(header["t"]), u=data[:, 1], v=data[:, 2])
        return state, int(header["p"])
