"""
Разностные операторы 4-го порядка на радиальной сетке.

В начале координат поле четное: призрачные узлы f(-h)=f(h), f(-2h)=f(2h).
Два последних узла закрываются смещенными шаблонами того же порядка точности.
"""
import numpy as np
from scipy.interpolate import CubicSpline


def _pad_even(f: np.ndarray) -> np.ndarray:
    return np.concatenate((f[2:0:-1], f))


def first_derivative(f: np.ndarray, h: float) -> np.ndarray:
    """f_r в узлах r_0..r_N"""
    g = _pad_even(f)
    n = f.size
    d = np.empty(n)
    # центральный шаблон для j = 0..N-2, g[j+2] соответствует f[j]
    d[: n - 2] = (-g[4:n + 2] + 8.0 * g[3:n + 1] - 8.0 * g[1:n - 1] + g[0:n - 2]) / (12.0 * h)
    d[n - 2] = (-f[n - 5] + 6.0 * f[n - 4] - 18.0 * f[n - 3] + 10.0 * f[n - 2] + 3.0 * f[n - 1]) / (12.0 * h)
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / (12.0 * h)
    return d


def second_derivative(f: np.ndarray, h: float) -> np.ndarray:
    """f_rr в узлах r_0..r_N"""
    g = _pad_even(f)
    n = f.size
    d = np.empty(n)
    d[: n - 2] = (-g[4:n + 2] + 16.0 * g[3:n + 1] - 30.0 * g[2:n] + 16.0 * g[1:n - 1] - g[0:n - 2]) / (12.0 * h * h)
    d[n - 2] = (11.0 * f[n - 1] - 20.0 * f[n - 2] + 6.0 * f[n - 3] + 4.0 * f[n - 4] - f[n - 5]) / (12.0 * h * h)
    d[n - 1] = (
        45.0 * f[n - 1] - 154.0 * f[n - 2] + 214.0 * f[n - 3]
        - 156.0 * f[n - 4] + 61.0 * f[n - 5] - 10.0 * f[n - 6]
    ) / (12.0 * h * h)
    return d


def radial_laplacian(f: np.ndarray, h: float) -> np.ndarray:
    """
    f_rr + (2/r) f_r; в r=0 предельная форма 3 f_rr(0).

    Args:
        f: Значения в узлах
        h: Шаг сетки

    Returns:
        Массив той же длины
    """
    f_rr = second_derivative(f, h)
    f_r = first_derivative(f, h)
    lap = np.empty_like(f_rr)
    r = np.arange(1, f.size) * h
    lap[1:] = f_rr[1:] + 2.0 * f_r[1:] / r
    lap[0] = 3.0 * f_rr[0]
    return lap


def even_spline(r: np.ndarray, f: np.ndarray) -> CubicSpline:
    """Кубический сплайн с f'(0)=0 (четное продолжение)"""
    return CubicSpline(r, f, bc_type=((1, 0.0), "not-a-knot"))
