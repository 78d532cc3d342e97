"""
Уравнение для автомодельного профиля и его локальные разложения.

Подстановка u(t, r) = (T-t)^{-alpha} U(rho), rho = r/(T-t) приводит к ОДУ

    (1 - rho^2) U'' + (2/rho - (2 + 2 alpha) rho) U' - alpha(alpha+1) U + U^p = 0

с особыми точками rho = 0 (центр) и rho = 1 (прошлый световой конус).
"""
from typing import Tuple, Union

import numpy as np

from ..core.constants import ModelConstants
from ..core.errors import SingularPoint

ArrayLike = Union[float, np.ndarray]


def profile_rhs(rho: float, U: float, Up: float, consts: ModelConstants) -> float:
    """
    Вторая производная U'' из уравнения профиля.

    Raises:
        SingularPoint: При rho = 0 или rho = 1
    """
    if rho == 0.0 or rho == 1.0:
        raise SingularPoint(f"rho={rho} - особая точка, используйте разложения в ряд", {"rho": rho})
    alpha = consts.alpha_f
    numerator = alpha * (alpha + 1.0) * U - U ** consts.p - (2.0 / rho - (2.0 + 2.0 * alpha) * rho) * Up
    return numerator / (1.0 - rho * rho)


def similarity_system(consts: ModelConstants):
    """Правая часть системы первого порядка (U, U') для solve_ivp"""
    alpha = consts.alpha_f
    p = consts.p
    c0 = alpha * (alpha + 1.0)
    c1 = 2.0 + 2.0 * alpha

    def rhs(rho, y):
        U, Up = y
        return [Up, (c0 * U - U ** p - (2.0 / rho - c1 * rho) * Up) / (1.0 - rho * rho)]

    return rhs


def lightcone_slope(b: float, consts: ModelConstants) -> float:
    """s(b) = 1/2 [1/2 (p-1) b^p - (p+1)/(p-1) b]"""
    p = consts.p
    return 0.5 * (0.5 * (p - 1) * b ** p - (p + 1) / (p - 1) * b)


def lightcone_series(b: float, rho: float, consts: ModelConstants) -> Tuple[float, float]:
    """Данные Тейлора первого порядка у rho = 1: U = b + s(b)(rho - 1)"""
    slope = lightcone_slope(b, consts)
    return b + slope * (rho - 1.0), slope


def interior_coefficient(c: ArrayLike, consts: ModelConstants) -> ArrayLike:
    """Коэффициент при rho^2 регулярного ряда в центре"""
    p = consts.p
    return ((p + 1) / (p - 1) ** 2 * c - 0.5 * c ** p) / 3.0


def interior_series(c: float, rho: float, consts: ModelConstants) -> Tuple[float, float]:
    """Данные Тейлора второго порядка у rho = 0: U = c + k(c) rho^2"""
    k = interior_coefficient(c, consts)
    return c + k * rho * rho, 2.0 * k * rho


def kw_integral(rho: ArrayLike, U: ArrayLike, Up: ArrayLike, consts: ModelConstants) -> ArrayLike:
    """
    Интеграл Кавиана-Вайсслера Q(rho).

    При p = 5 Q сохраняется вдоль любой траектории уравнения профиля.
    """
    p = consts.p
    rho = np.asarray(rho, dtype=float)
    U = np.asarray(U, dtype=float)
    Up = np.asarray(Up, dtype=float)
    bracket = 3.0 * (5 - p) / (4.0 * (p - 1)) - 2.0 / (p - 1) ** 2
    one_minus = 1.0 - rho ** 2
    q = (
        0.5 * one_minus * rho ** 3 * Up ** 2
        + 0.5 * rho ** 2 * one_minus * U * Up
        + bracket * rho ** 3 * U ** 2
        + rho ** 3 * U ** (p + 1) / (p + 1)
    )
    return q if q.ndim else float(q)


def series_power(coeffs: np.ndarray, power: int, order: int) -> np.ndarray:
    """Усеченная степень степенного ряда (коэффициенты до s^order)"""
    result = np.zeros(order + 1)
    result[0] = 1.0
    base = np.zeros(order + 1)
    base[: min(order + 1, coeffs.size)] = coeffs[: order + 1]
    for _ in range(power):
        result = np.convolve(result, base)[: order + 1]
    return result


def lightcone_taylor(b: float, consts: ModelConstants, order: int) -> np.ndarray:
    """
    Коэффициенты аналитического решения у rho = 1 по степеням s = 1 - rho.

    Нелинейная рекуррентная формула для уравнения, умноженного на rho:
    s(2-s)(1-s) U_ss - (2 - 2k(1-s)^2) U_s + (1-s) N(U) = 0, k = 1 + alpha,
    N(U) = -alpha(alpha+1) U + U^p. Первые два коэффициента совпадают с
    lightcone_series.

    Args:
        b: Значение U(1)
        consts: Константы модели
        order: Старший порядок

    Returns:
        Массив c_0..c_order
    """
    alpha = consts.alpha_f
    kappa = 1.0 + alpha
    c = np.zeros(order + 1)
    c[0] = b
    nonlinear = np.zeros(order + 1)
    for n in range(order):
        power = series_power(c[: n + 1], consts.p, n)
        nonlinear[n] = -alpha * (alpha + 1.0) * c[n] + power[n]
        forcing = nonlinear[n] - (nonlinear[n - 1] if n >= 1 else 0.0)
        numerator = c[n] * (-3.0 * n * (n - 1) - 4.0 * kappa * n) + forcing
        if n >= 1:
            numerator += c[n - 1] * (n - 1) * (n - 2 + 2.0 * kappa)
        c[n + 1] = -numerator / ((n + 1) * (2.0 * n + 2.0 * kappa - 2.0))
    return c


def evaluate_series(coeffs: np.ndarray, s: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """Значение ряда и производная по s"""
    values = np.polynomial.polynomial.polyval(s, coeffs)
    derivative = np.polynomial.polynomial.polyval(s, np.polynomial.polynomial.polyder(coeffs))
    return values, derivative


def convergence_radius(coeffs: np.ndarray, tail: int = 10) -> float:
    """Оценка радиуса сходимости по признаку Коши на последних членах"""
    k = np.arange(coeffs.size)
    mask = (k > 0) & (np.abs(coeffs) > 0)
    k_tail = k[mask][-tail:]
    if k_tail.size == 0:
        return np.inf
    roots = np.abs(coeffs[k_tail]) ** (1.0 / k_tail)
    largest = float(np.max(roots))
    return np.inf if largest == 0.0 else 1.0 / largest


def parabolic_profile(z: ArrayLike, b: float, consts: ModelConstants) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
    """F(z) = a/(1 + b z^2)^alpha и две ее производные"""
    alpha = consts.alpha_f
    a = consts.a
    z = np.asarray(z, dtype=float)
    w = 1.0 + b * z ** 2
    F = a * w ** (-alpha)
    Fp = -2.0 * alpha * a * b * z * w ** (-alpha - 1.0)
    Fpp = -2.0 * alpha * a * b * w ** (-alpha - 1.0) + 4.0 * alpha * (alpha + 1.0) * a * b ** 2 * z ** 2 * w ** (-alpha - 2.0)
    return F, Fp, Fpp


def parabolic_ode_residual(z: ArrayLike, b: float, consts: ModelConstants) -> ArrayLike:
    """Невязка z^2 F'' + (4 alpha + 3) z F' + 4 alpha(alpha+1) F - 4 F^p для F = parabolic_profile"""
    alpha = consts.alpha_f
    z = np.asarray(z, dtype=float)
    F, Fp, Fpp = parabolic_profile(z, b, consts)
    return z ** 2 * Fpp + (4.0 * alpha + 3.0) * z * Fp + 4.0 * alpha * (alpha + 1.0) * F - 4.0 * F ** consts.p
