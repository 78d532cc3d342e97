"""
Стрельба для автомодельных профилей U_n.

Решение стартует у светового конуса rho = 1 - eps с данными lightcone_series и
интегрируется к центру. Параметр b = U(1) подбирается так, чтобы решение было
регулярным в центре.
"""
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import root_scalar

from ..config.lab_config import ShootingControls
from ..core.constants import Criticality, ModelConstants
from ..core.errors import ConfigurationError, NoConvergence, NotFound
from ..utils.logger import get_structured_logger
from .similarity import interior_coefficient, kw_integral, lightcone_series, similarity_system

logger = get_structured_logger("profiles.shooting")


def count_sign_changes(values: np.ndarray, tolerance: float = 0.0) -> int:
    """Число смен знака; значения с |x| <= tolerance пропускаются"""
    signs = np.sign(values[np.abs(values) > tolerance])
    if signs.size < 2:
        return 0
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def node_reference(consts: ModelConstants) -> float:
    """
    Уровень, относительно которого считаются узлы профиля.

    В суперкритическом случае профили монотонны и не имеют нулей; индекс n
    считает пересечения с постоянным решением U_0 = a.
    """
    return consts.a if consts.criticality is Criticality.SUPERCRITICAL else 0.0


@dataclass(frozen=True)
class SimilarityProfile:
    """
    Решенный профиль U_n на [0, 1].

    Attributes:
        consts: Константы модели
        n: Индекс профиля
        b_n: Значение U(1)
        rho, U, Up: Таблица (rho, U, U') с шагом sample_spacing
        U0_value: Значение U(0)
        center_residual: U'(eps_center) на сошедшейся траектории
    """
    consts: ModelConstants
    n: int
    b_n: float
    rho: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)
    Up: np.ndarray = field(repr=False)
    U0_value: float
    center_residual: float = 0.0

    @cached_property
    def hermite(self) -> CubicHermiteSpline:
        return CubicHermiteSpline(self.rho, self.U, self.Up)

    @cached_property
    def _hermite_derivative(self):
        return self.hermite.derivative()

    @property
    def sample_spacing(self) -> float:
        return float(np.max(np.diff(self.rho)))

    @property
    def is_constant(self) -> bool:
        return bool(np.allclose(self.U, self.U[0], rtol=0.0, atol=1e-12) and np.allclose(self.Up, 0.0, atol=1e-12))

    def evaluate(self, rho):
        """U и U' в точках rho из [0, 1]"""
        rho = np.asarray(rho, dtype=float)
        return self.hermite(rho), self._hermite_derivative(rho)

    def node_count(self) -> int:
        reference = node_reference(self.consts)
        return count_sign_changes(self.U[1:-1] - reference, 1e-10 * max(1.0, abs(reference)))

    def to_table(self) -> str:
        lines = [f"# p={self.consts.p} n={self.n} b_n={self.b_n:.17g}"]
        for rho, U, Up in zip(self.rho, self.U, self.Up):
            lines.append(f"{rho:.17g} {U:.17g} {Up:.17g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def constant(cls, consts: ModelConstants, spacing: float = 1e-3) -> "SimilarityProfile":
        """Постоянный профиль U_0 = a"""
        rho = _sample_grid(spacing)
        return cls(consts=consts, n=0, b_n=consts.a, rho=rho, U=np.full(rho.size, consts.a),
                   Up=np.zeros(rho.size), U0_value=consts.a)


def _sample_grid(spacing: float) -> np.ndarray:
    count = int(round(1.0 / spacing))
    return np.linspace(0.0, 1.0, count + 1)


def _divergence_event(threshold: float):
    def event(rho, y):
        return threshold - abs(y[0])

    event.terminal = True
    return event


class ProfileShooter:
    """Стрельба от светового конуса к центру для заданного p"""

    def __init__(self, consts: ModelConstants, controls: Optional[ShootingControls] = None):
        self.consts = consts
        self.controls = controls or ShootingControls()
        self._rhs = similarity_system(consts)
        self._event = _divergence_event(self.controls.divergence_threshold)

    def integrate(self, b: float, dense: bool = False, rtol: Optional[float] = None):
        """Траектория от 1 - eps к eps_center для U(1) = b"""
        ctl = self.controls
        start = 1.0 - ctl.eps_lightcone
        U1, Up1 = lightcone_series(b, start, self.consts)
        return solve_ivp(
            self._rhs, (start, ctl.eps_center), [U1, Up1],
            method="DOP853", rtol=rtol or ctl.rtol, atol=ctl.atol,
            events=self._event, dense_output=dense,
        )

    def miss(self, b: float, rtol: Optional[float] = None) -> float:
        """
        Невязка регулярности в центре.

        Сингулярная мода ведет себя как A/rho, поэтому разность U' с наклоном
        регулярного ряда умножается на eps_center^2. Для разошедшейся траектории
        возвращается nan.
        """
        sol = self.integrate(b, rtol=rtol)
        if sol.status != 0:
            return float("nan")
        U_e, Up_e = sol.y[:, -1]
        eps = self.controls.eps_center
        return eps * eps * (Up_e - 2.0 * interior_coefficient(U_e, self.consts) * eps)

    def scan(self) -> Tuple[np.ndarray, np.ndarray]:
        """Значения miss на сетке b из (0, factor*a]"""
        ctl = self.controls
        b_hi = ctl.b_window_factor * self.consts.a
        b_grid = np.linspace(b_hi / ctl.b_scan_points, b_hi, ctl.b_scan_points)
        misses = np.array([self.miss(b) for b in b_grid])
        return b_grid, misses

    def refine(self, lo: float, hi: float, rtol: Optional[float] = None) -> float:
        """Уточнение корня miss в скобке [lo, hi]"""
        def target(b):
            value = self.miss(b, rtol=rtol)
            if not np.isfinite(value):
                raise ValueError("траектория разошлась внутри скобки")
            return value

        result = root_scalar(target, bracket=(lo, hi), method="brentq",
                             xtol=self.controls.tol, maxiter=self.controls.max_iter)
        if not result.converged:
            raise NoConvergence("Уточнение b не сошлось", {"bracket": (lo, hi), "flag": result.flag})
        return float(result.root)

    def roots(self) -> List[float]:
        """Все корни miss в окне поиска"""
        b_grid, misses = self.scan()
        found: List[float] = []
        for i in range(b_grid.size - 1):
            m0, m1 = misses[i], misses[i + 1]
            if not (np.isfinite(m0) and np.isfinite(m1)):
                continue
            if m0 == 0.0:
                found.append(float(b_grid[i]))
                continue
            if m0 * m1 < 0.0:
                logger.log_shooting_bracket(lo=float(b_grid[i]), hi=float(b_grid[i + 1]))
                try:
                    found.append(self.refine(b_grid[i], b_grid[i + 1]))
                except ValueError:
                    logger.debug("Bracket skipped", lo=float(b_grid[i]), hi=float(b_grid[i + 1]))
        return found

    def count_nodes(self, b: float) -> int:
        """Число узлов сошедшейся траектории"""
        if abs(b - self.consts.a) <= 1e-8 * self.consts.a:
            return 0
        sol = self.integrate(b, dense=True)
        rho = np.linspace(self.controls.eps_center, 1.0 - self.controls.eps_lightcone, 4001)
        reference = node_reference(self.consts)
        return count_sign_changes(sol.sol(rho)[0] - reference, 1e-10 * max(1.0, abs(reference)))

    def kw_drift(self, b: float, rho_min: float = 0.3, samples: int = 2001) -> float:
        """
        Относительный уход Q вдоль траектории U(1) = b на [rho_min, 1 - eps].

        Отсчет от значения у светового конуса, нормировка max(1, |Q|).
        При p = 5 Q - первый интеграл, и уход ограничен точностью интегратора.
        """
        sol = self.integrate(b, dense=True)
        lo = max(rho_min, float(sol.t[-1]))
        rho = np.linspace(lo, 1.0 - self.controls.eps_lightcone, samples)
        U, Up = sol.sol(rho)
        q = kw_integral(rho, U, Up, self.consts)
        reference = float(q[-1])
        return float(np.max(np.abs(q - reference)) / max(1.0, abs(reference)))

    def build_profile(self, b: float, n: int) -> SimilarityProfile:
        """Таблица профиля для сошедшегося b"""
        ctl = self.controls
        sol = self.integrate(b, dense=True)
        if sol.status != 0:
            raise NoConvergence("Траектория сошедшегося профиля разошлась", {"b": b})
        rho = _sample_grid(ctl.sample_spacing)
        U = np.empty(rho.size)
        Up = np.empty(rho.size)
        inner = (rho >= ctl.eps_center) & (rho <= 1.0 - ctl.eps_lightcone)
        values = sol.sol(rho[inner])
        U[inner], Up[inner] = values[0], values[1]

        U_e, Up_e = sol.y[:, -1]
        c = U_e - interior_coefficient(U_e, self.consts) * ctl.eps_center ** 2
        k = interior_coefficient(c, self.consts)
        center = rho < ctl.eps_center
        U[center] = c + k * rho[center] ** 2
        Up[center] = 2.0 * k * rho[center]

        edge = rho > 1.0 - ctl.eps_lightcone
        for i in np.flatnonzero(edge):
            U[i], Up[i] = lightcone_series(b, rho[i], self.consts)

        return SimilarityProfile(consts=self.consts, n=n, b_n=float(b), rho=rho, U=U, Up=Up,
                                 U0_value=float(c), center_residual=float(Up_e))


def shoot_profile(consts: ModelConstants, n: int,
                  controls: Optional[ShootingControls] = None) -> SimilarityProfile:
    """
    Поиск профиля U_n стрельбой.

    Args:
        consts: Константы модели
        n: Требуемый индекс (число узлов)
        controls: Параметры стрельбы

    Returns:
        SimilarityProfile

    Raises:
        NotFound: В окне поиска нет профиля с n узлами (при p = 5 для всех n >= 1)
        NoConvergence: Уточнение b не сошлось
    """
    if n < 0:
        raise ConfigurationError(f"Индекс профиля должен быть >= 0, получено {n}", {"n": n})
    shooter = ProfileShooter(consts, controls)
    logger.info("Shooting started", p=consts.p, n=n)

    candidates = []
    for b in shooter.roots():
        nodes = shooter.count_nodes(b)
        logger.log_root_found(kind="profile", value=b, nodes=nodes)
        if nodes == n:
            candidates.append(b)

    if not candidates:
        hint = ""
        if consts.criticality is Criticality.CRITICAL and n >= 1:
            hint = (" При p=5 интеграл Кавиана-Вайсслера дает единственность:"
                    " постоянный профиль U_0 - единственный автомодельный профиль.")
        raise NotFound(f"Профиль с n={n} не найден в окне поиска b.{hint}", {"p": consts.p, "n": n})
    if len(candidates) > 1:
        logger.warning("Several profiles share the node count", n=n, candidates=candidates)

    b_n = candidates[0]
    if n == 0 and abs(b_n - consts.a) <= 1e-6 * consts.a:
        return replace(SimilarityProfile.constant(consts, shooter.controls.sample_spacing), b_n=b_n)
    return shooter.build_profile(b_n, n)
