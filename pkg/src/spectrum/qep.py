"""
Квадратичная задача на собственные значения для возмущений профиля U_n.

(1 - rho^2) xi'' + (2/rho - 2 kappa rho) xi' + W xi = 0,
kappa = 1 + alpha + lambda, W = p U^{p-1} - alpha(alpha+1) - (1+2alpha) lambda - lambda^2.

Допустимы решения, регулярные в центре и аналитические на световом конусе.
Регулярное решение интегрируется от центра наружу, аналитическая ветвь у
rho = 1 берется рядом Фробениуса по s = 1 - rho и интегрируется внутрь; невязка -
вронскиан в точке сшивки.
"""
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from ..config.lab_config import SpectrumControls
from ..core.errors import NoRootInWindow, ProfileNotSampledDenselyEnough
from ..profiles.shooting import SimilarityProfile
from ..profiles.similarity import convergence_radius, evaluate_series, lightcone_taylor, series_power
from ..utils.logger import get_structured_logger
from .modes import Branch, EigenMode

logger = get_structured_logger("spectrum.qep")

MAX_PROFILE_SPACING = 1e-3
RESONANCE_TOLERANCE = 1e-9
DUPLICATE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class LightconeBranch:
    """
    Аналитическая ветвь у rho = 1.

    Attributes:
        coeffs: Коэффициенты по степеням s (регуляризованные у резонанса)
        obstruction: Препятствие к аналитичности ветви с показателем 0 (только у резонанса)
        obstruction_scale: Масштаб слагаемых препятствия
    """
    coeffs: np.ndarray
    obstruction: Optional[float] = None
    obstruction_scale: float = 1.0

    @property
    def degenerate(self) -> bool:
        return (self.obstruction is not None
                and abs(self.obstruction) <= RESONANCE_TOLERANCE * self.obstruction_scale)


class QuadraticEigenproblem:
    """Функция невязки и собственные функции для фиксированного профиля"""

    def __init__(self, profile: SimilarityProfile, controls: Optional[SpectrumControls] = None):
        self.profile = profile
        self.controls = controls or SpectrumControls()
        self.consts = profile.consts
        if profile.sample_spacing > MAX_PROFILE_SPACING * (1.0 + 1e-9):
            raise ProfileNotSampledDenselyEnough(
                f"Шаг таблицы профиля {profile.sample_spacing} больше {MAX_PROFILE_SPACING}",
                {"sample_spacing": profile.sample_spacing},
            )
        p = self.consts.p
        order = self.controls.series_order
        U_series = lightcone_taylor(profile.b_n, self.consts, order)
        self._potential_series = p * series_power(U_series, p - 1, order)
        self._potential = self._make_potential()

    def _make_potential(self) -> Callable[[float], float]:
        p = self.consts.p
        if self.profile.is_constant:
            value = p * self.profile.b_n ** (p - 1)
            return lambda rho: value
        hermite = self.profile.hermite
        return lambda rho: p * float(hermite(rho)) ** (p - 1)

    def _shift(self, lam: float) -> float:
        alpha = self.consts.alpha_f
        return alpha * (alpha + 1.0) + (1.0 + 2.0 * alpha) * lam + lam * lam

    def _system(self, lam: float):
        kappa = 1.0 + self.consts.alpha_f + lam
        shift = self._shift(lam)
        potential = self._potential

        def rhs(rho, y):
            xi, xip = y
            W = potential(rho) - shift
            return [xip, -((2.0 / rho - 2.0 * kappa * rho) * xip + W * xi) / (1.0 - rho * rho)]

        return rhs

    def lightcone_branch(self, lam: float) -> LightconeBranch:
        """
        Ряд аналитического решения у rho = 1.

        Показатели Фробениуса 0 и gamma = 1 - alpha - lambda. При gamma, близком к
        целому m >= 1, ряд с показателем 0 умножается на prod_{j<=order}(1 - gamma/j),
        что делает коэффициенты целыми функциями lambda; при точном резонансе
        остается ветвь s^m.
        """
        order = self.controls.series_order
        gamma = 1.0 - self.consts.alpha_f - lam
        kappa = 2.0 - gamma
        W = self._potential_series.copy()
        W[0] -= self._shift(lam)
        q = W.copy()
        q[1:] -= W[:-1]

        def numerator(c: np.ndarray, n: int) -> Tuple[float, float]:
            terms = [c[n] * (-3.0 * n * (n - 1) - 4.0 * kappa * n)]
            if n >= 1:
                terms.append(c[n - 1] * (n - 1) * (n - 2 + 2.0 * kappa))
            terms.append(float(np.dot(q[: n + 1], c[n::-1])))
            return float(sum(terms)), float(sum(abs(t) for t in terms))

        n_star = int(round(gamma)) - 1 if gamma > 0.5 else -1
        if n_star >= order:
            n_star = -1
        c = np.zeros(order + 1)
        c[0] = 1.0
        obstruction = None
        obstruction_scale = 1.0

        if n_star < 0:
            for n in range(order):
                value, _ = numerator(c, n)
                c[n + 1] = -value / (2.0 * (n + 1) * (n + 1 - gamma))
            return LightconeBranch(coeffs=c)

        # коэффициенты до резонансного порядка конечны и без регуляризации
        for n in range(n_star):
            value, _ = numerator(c, n)
            c[n + 1] = -value / (2.0 * (n + 1) * (n + 1 - gamma))
        obstruction, obstruction_scale = numerator(c, n_star)

        m = n_star + 1
        j = np.arange(1, order + 1)
        others = np.prod(np.where(j == m, 1.0, 1.0 - gamma / j))
        resonant = 1.0 - gamma / m
        c[: m] *= others * resonant
        c[m] = -obstruction * others / (2.0 * m * m)
        for n in range(m, order):
            value, _ = numerator(c, n)
            c[n + 1] = -value / (2.0 * (n + 1) * (n + 1 - gamma))
        return LightconeBranch(coeffs=c, obstruction=obstruction, obstruction_scale=max(obstruction_scale, 1.0))

    def _standoff(self, branch: LightconeBranch) -> float:
        radius = convergence_radius(branch.coeffs)
        return float(min(self.controls.series_standoff, radius / 3.0))

    def _left(self, lam: float, dense: bool = False):
        ctl = self.controls
        eps = ctl.eps_center
        a1 = -(self._potential(0.0) - self._shift(lam)) / 6.0
        y0 = [1.0 + a1 * eps * eps, 2.0 * a1 * eps]
        return solve_ivp(self._system(lam), (eps, ctl.match_point), y0, method="DOP853",
                         rtol=ctl.rtol, atol=ctl.atol, dense_output=dense)

    def _right(self, lam: float, branch: LightconeBranch, dense: bool = False):
        ctl = self.controls
        s0 = self._standoff(branch)
        value, ds = evaluate_series(branch.coeffs, s0)
        return solve_ivp(self._system(lam), (1.0 - s0, ctl.match_point), [value, -ds], method="DOP853",
                         rtol=ctl.rtol, atol=ctl.atol, dense_output=dense), s0

    def miss(self, lam: float) -> float:
        """Вронскиан регулярного и аналитического решений в точке сшивки"""
        left = self._left(lam)
        branch = self.lightcone_branch(lam)
        right, _ = self._right(lam, branch)
        xl, xlp = left.y[:, -1]
        xr, xrp = right.y[:, -1]
        return float((xl * xrp - xlp * xr) / np.hypot(xl, xlp))

    def resonant_eigenvalues(self, lo: float, hi: float) -> List[float]:
        """Резонансные lambda с нулевым препятствием: обе ветви аналитичны"""
        alpha = self.consts.alpha_f
        found = []
        m = 1
        while True:
            lam = 1.0 - alpha - m
            if lam <= lo:
                break
            if lam < hi and m <= self.controls.series_order:
                if self.lightcone_branch(lam).degenerate:
                    found.append(lam)
            m += 1
        return found

    def eigenfunction(self, lam: float, branch_kind: Branch = Branch.NUMERICAL) -> EigenMode:
        """
        Таблица собственной функции на [0, 1].

        Нормировка xi(1) = 1; если xi(1) = 0, то xi(0) = 1.
        """
        ctl = self.controls
        left = self._left(lam, dense=True)
        branch = self.lightcone_branch(lam)
        if branch.degenerate:
            return self._left_only(lam, left, branch_kind)
        right, s0 = self._right(lam, branch, dense=True)

        xl, xlp = left.y[:, -1]
        xr, xrp = right.y[:, -1]
        scale = xl / xr if abs(xr) >= abs(xrp) else xlp / xrp

        count = int(round(1.0 / ctl.sample_spacing))
        rho = np.linspace(0.0, 1.0, count + 1)
        xi = np.empty_like(rho)
        eps = ctl.eps_center
        a1 = -(self._potential(0.0) - self._shift(lam)) / 6.0
        center = rho < eps
        xi[center] = 1.0 + a1 * rho[center] ** 2
        inner = (~center) & (rho <= ctl.match_point)
        xi[inner] = left.sol(rho[inner])[0]
        middle = (rho > ctl.match_point) & (rho <= 1.0 - s0)
        xi[middle] = scale * right.sol(rho[middle])[0]
        edge = rho > 1.0 - s0
        xi[edge] = scale * evaluate_series(branch.coeffs, 1.0 - rho[edge])[0]
        return _normalized(lam, rho, xi, branch_kind)

    def _left_only(self, lam: float, left, branch_kind: Branch) -> EigenMode:
        """Регулярное решение целиком интегрированием наружу (вырожденный резонанс)"""
        ctl = self.controls
        count = int(round(1.0 / ctl.sample_spacing))
        rho = np.linspace(0.0, 1.0, count + 1)
        end = 1.0 - 1e-6
        sol = solve_ivp(self._system(lam), (ctl.eps_center, end), left.y[:, 0], method="DOP853",
                        rtol=ctl.rtol, atol=ctl.atol, dense_output=True)
        xi = np.empty_like(rho)
        a1 = -(self._potential(0.0) - self._shift(lam)) / 6.0
        center = rho < ctl.eps_center
        xi[center] = 1.0 + a1 * rho[center] ** 2
        body = ~center
        clipped = np.minimum(rho[body], end)
        values = sol.sol(clipped)
        xi[body] = values[0] + values[1] * (rho[body] - clipped)
        return _normalized(lam, rho, xi, branch_kind)


def _normalized(lam: float, rho: np.ndarray, xi: np.ndarray, branch_kind: Branch) -> EigenMode:
    peak = float(np.max(np.abs(xi)))
    if abs(xi[-1]) > 1e-8 * peak:
        return EigenMode(lam=lam, branch=branch_kind, rho=rho, xi=xi / xi[-1], normalization="xi(1)=1")
    return EigenMode(lam=lam, branch=branch_kind, rho=rho, xi=xi / xi[0], normalization="xi(0)=1")


def _deduplicate(values: List[float]) -> List[float]:
    result: List[float] = []
    for value in sorted(values, reverse=True):
        if not result or abs(result[-1] - value) > DUPLICATE_TOLERANCE * max(1.0, abs(value)):
            result.append(value)
    return result


def qep_spectrum(profile: SimilarityProfile, window: Optional[Tuple[float, float]] = None,
                 controls: Optional[SpectrumControls] = None) -> List[EigenMode]:
    """
    Собственные значения в открытом окне (lo, hi).

    Args:
        profile: Сошедшийся профиль
        window: Окно по lambda (по умолчанию из controls)
        controls: Параметры сканирования

    Returns:
        Моды в порядке убывания lambda

    Raises:
        ProfileNotSampledDenselyEnough: Таблица профиля слишком редкая
        NoRootInWindow: В окне нет собственных значений
    """
    ctl = controls or SpectrumControls()
    lo, hi = window if window is not None else (ctl.window_lo, ctl.window_hi)
    if not lo < hi:
        raise NoRootInWindow(f"Пустое окно ({lo}, {hi})", {"window": (lo, hi)})
    problem = QuadraticEigenproblem(profile, ctl)
    logger.info("Spectrum scan started", p=profile.consts.p, n=profile.n, lo=lo, hi=hi)

    count = max(4, int(np.ceil((hi - lo) * ctl.points_per_unit)))
    grid = np.linspace(lo, hi, count + 1)[1:-1]
    misses = np.array([problem.miss(lam) for lam in grid])

    roots = problem.resonant_eigenvalues(lo, hi)
    for i in range(grid.size):
        if misses[i] == 0.0:
            roots.append(float(grid[i]))
        elif i + 1 < grid.size and misses[i] * misses[i + 1] < 0.0:
            logger.log_shooting_bracket(lo=float(grid[i]), hi=float(grid[i + 1]))
            roots.append(brentq(problem.miss, grid[i], grid[i + 1], xtol=ctl.root_tol, rtol=4e-16))

    eigenvalues = _deduplicate(roots)
    if not eigenvalues:
        raise NoRootInWindow(f"Нет собственных значений в окне ({lo}, {hi})", {"window": (lo, hi)})
    for lam in eigenvalues:
        logger.log_root_found(kind="eigenvalue", value=lam, n=profile.n)
    return [problem.eigenfunction(lam) for lam in eigenvalues]
