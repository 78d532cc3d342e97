"""
Константы модели u_tt - u_rr - (2/r)u_r = u^p.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Tuple

import numpy as np

from .errors import InvalidExponent


class Criticality(Enum):
    """Тип нелинейности по знаку показателя масштабирования энергии"""
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


@dataclass(frozen=True)
class ModelConstants:
    """
    Показатель p и производные константы.

    Attributes:
        p: Нечетный показатель нелинейности (p >= 3)
        alpha: Показатель скорости разрушения 2/(p-1)
        a: Амплитуда однородного решения [2(p+1)/(p-1)^2]^{1/(p-1)}
        beta: Показатель масштабирования энергии (p-5)/(p-1)
        criticality: Тип нелинейности
    """
    p: int
    alpha: Fraction
    a: float
    beta: Fraction
    criticality: Criticality

    @property
    def alpha_f(self) -> float:
        return float(self.alpha)

    @property
    def beta_f(self) -> float:
        return float(self.beta)

    @property
    def gauge_eigenvalue(self) -> Fraction:
        return Fraction(1)

    @property
    def lambda_bar0(self) -> Fraction:
        return Fraction(-2 * (self.p + 1), self.p - 1)

    @property
    def collapse_exponent(self) -> float:
        """Показатель (p-1)/2 локального временного масштаба u_tt = u^p"""
        return (self.p - 1) / 2.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "alpha": str(self.alpha),
            "a": self.a,
            "beta": str(self.beta),
            "criticality": self.criticality.value,
        }


def derive_constants(p: int) -> ModelConstants:
    """
    Вычисление констант модели по показателю p.

    Args:
        p: Нечетное целое p >= 3

    Returns:
        ModelConstants

    Raises:
        InvalidExponent: Если p четное, нецелое или p <= 1
    """
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise InvalidExponent(f"Показатель p должен быть целым, получено {p!r}", {"p": p})
    p = int(p)
    if p <= 1 or p % 2 == 0:
        raise InvalidExponent(
            f"Показатель p должен быть нечетным и p >= 3, получено {p}",
            {"p": p, "valid": "odd integer >= 3"},
        )

    alpha = Fraction(2, p - 1)
    beta = Fraction(p - 5, p - 1)
    a = (2.0 * (p + 1) / (p - 1) ** 2) ** (1.0 / (p - 1))

    if beta < 0:
        criticality = Criticality.SUBCRITICAL
    elif beta == 0:
        criticality = Criticality.CRITICAL
    else:
        criticality = Criticality.SUPERCRITICAL

    return ModelConstants(p=p, alpha=alpha, a=a, beta=beta, criticality=criticality)


def homogeneous_solution(consts: ModelConstants, T: float, t: float) -> Tuple[float, float]:
    """Однородное решение a(T-t)^{-alpha} и его производная по времени"""
    delta = T - t
    u = consts.a * delta ** (-consts.alpha_f)
    v = consts.alpha_f * u / delta
    return u, v
