"""
Спектр линеаризации около однородного решения U_0 = a.

Собственные функции ищутся в виде xi = sum a_k rho^{2k}; ряд обрывается
ровно тогда, когда lambda - корень квадратного уравнения для некоторого k.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import List, NamedTuple, Optional, Tuple, Union

import numpy as np

from ..core.constants import ModelConstants
from ..core.errors import ConfigurationError, NonTerminating

Number = Union[int, float, Fraction]

MAX_TERMS = 50
FLOAT_TOLERANCE = 1e-12


class Branch(Enum):
    """Ветвь собственного значения"""
    PRIMARY = "primary"
    BARRED = "barred"
    NUMERICAL = "numerical"


class EigenPair(NamedTuple):
    """Пара (lambda_k, lambda_bar_k)"""
    lam: Fraction
    lam_bar: Fraction

    @property
    def is_gauge(self) -> bool:
        return self.lam == 1


@dataclass(frozen=True)
class EigenMode:
    """
    Собственная мода.

    Attributes:
        lam: Скорость роста по медленному времени
        branch: Ветвь
        coeffs: Коэффициенты a_k полиномиальной моды (xi(0) = 1)
        rho, xi: Таблица численной моды (xi(1) = 1, если xi(1) != 0)
        normalization: Условие нормировки
    """
    lam: float
    branch: Branch
    coeffs: Optional[Tuple[Number, ...]] = None
    rho: Optional[np.ndarray] = field(default=None, repr=False)
    xi: Optional[np.ndarray] = field(default=None, repr=False)
    normalization: str = "xi(0)=1"

    @property
    def is_gauge(self) -> bool:
        return abs(self.lam - 1.0) < 1e-8

    @property
    def is_polynomial(self) -> bool:
        return self.coeffs is not None

    def coefficient(self, k: int) -> float:
        """Коэффициент при rho^{2k}; за точкой обрыва 0"""
        if self.coeffs is None:
            raise ValueError("У численной моды нет полиномиальных коэффициентов")
        return float(self.coeffs[k]) if k < len(self.coeffs) else 0.0

    def evaluate(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        if self.coeffs is not None:
            even = np.zeros(2 * len(self.coeffs) - 1)
            even[::2] = [float(c) for c in self.coeffs]
            return np.polynomial.polynomial.polyval(rho, even)
        return np.interp(rho, self.rho, self.xi)

    def to_table(self) -> str:
        if self.rho is None:
            rho = np.linspace(0.0, 1.0, 1001)
            xi = self.evaluate(rho)
        else:
            rho, xi = self.rho, self.xi
        lines = [f"# lambda={self.lam:.17g} branch={self.branch.value} {self.normalization}"]
        lines.extend(f"{r:.17g} {x:.17g}" for r, x in zip(rho, xi))
        return "\n".join(lines) + "\n"


def _exact(value: Number) -> Optional[Fraction]:
    if isinstance(value, Rational):
        return Fraction(value)
    candidate = Fraction(value).limit_denominator(10 ** 6)
    return candidate if float(candidate) == float(value) else None


def u0_spectrum(consts: ModelConstants, k_max: int) -> List[EigenPair]:
    """
    Замкнутый спектр около U_0: lambda_k = 1 - 2k, lambda_bar_k = -2(p+1)/(p-1) - 2k.

    Args:
        consts: Константы модели
        k_max: Наибольший индекс k (k_max >= 0)

    Returns:
        Список пар для k = 0..k_max; lambda_0 = 1 - калибровочная мода
    """
    if k_max < 0:
        raise ConfigurationError(f"k_max должен быть >= 0, получено {k_max}", {"k_max": k_max})
    bar0 = consts.lambda_bar0
    return [EigenPair(lam=Fraction(1 - 2 * k), lam_bar=bar0 - 2 * k) for k in range(k_max + 1)]


def _recurrence_terms(consts: ModelConstants, lam, k: int):
    p = consts.p
    q = Fraction(p + 3, p - 1)
    c = Fraction(2 * (p + 1), p - 1)
    if not isinstance(lam, Fraction):
        q, c = float(q), float(c)
    numerator = lam * lam + (4 * k + q) * lam + 2 * k * (2 * k + q) - c
    denominator = 2 * (k + 1) * (2 * k + 3)
    return numerator, denominator


def u0_truncation_residual(consts: ModelConstants, lam: Number, k: int) -> Number:
    """Значение квадратного многочлена, обращающегося в 0 при обрыве ряда на k-м члене"""
    exact = _exact(lam)
    numerator, _ = _recurrence_terms(consts, exact if exact is not None else float(lam), k)
    return numerator


def recurrence_ratio(consts: ModelConstants, lam: Number, k: int) -> float:
    """Отношение a_{k+1}/a_k; стремится к 1 для lambda вне спектра"""
    numerator, denominator = _recurrence_terms(consts, float(lam), k)
    return float(numerator / denominator)


def u0_eigenfunction(consts: ModelConstants, lam: Number, k_max: int = MAX_TERMS) -> EigenMode:
    """
    Полиномиальная собственная функция около U_0.

    Рациональные lambda обрабатываются точно (Fraction), остальные в плавающей
    точке с допуском FLOAT_TOLERANCE.

    Args:
        consts: Константы модели
        lam: Собственное значение
        k_max: Предел числа членов

    Returns:
        EigenMode с коэффициентами a_0 = 1, ..., a_k

    Raises:
        NonTerminating: Ряд не обрывается за k_max членов
    """
    exact = _exact(lam)
    value = exact if exact is not None else float(lam)
    coeffs: List[Number] = [Fraction(1) if exact is not None else 1.0]
    for k in range(k_max):
        numerator, denominator = _recurrence_terms(consts, value, k)
        if exact is not None:
            terminated = numerator == 0
        else:
            scale = value * value + abs(value) * (4 * k + 3) + 4 * k * (k + 1) + 6
            terminated = abs(numerator) <= FLOAT_TOLERANCE * scale
        if terminated:
            primary = 1 - 2 * k
            branch = Branch.PRIMARY if abs(float(value) - primary) < 1e-9 else Branch.BARRED
            return EigenMode(lam=float(value), branch=branch, coeffs=tuple(coeffs))
        coeffs.append(coeffs[-1] * numerator / denominator)
    raise NonTerminating(
        f"Ряд не обрывается за {k_max} членов: lambda={float(value)} не собственное значение",
        {"lambda": float(value), "k_max": k_max},
    )
