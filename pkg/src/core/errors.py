"""
Иерархия исключений лаборатории.

Каждое исключение несет код завершения CLI:
2 - ошибка конфигурации, 3 - численный сбой, 4 - неопределенный вердикт.
"""
from typing import Any, Dict, Optional


class LabError(Exception):
    """Базовое исключение лаборатории"""

    exit_code: int = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": self.details,
        }


class ConfigurationError(LabError):
    """Некорректные входные параметры или конфигурация"""

    exit_code = 2


class NumericalError(LabError):
    """Численная процедура не смогла выдать результат"""

    exit_code = 3


class InconclusiveError(LabError):
    """Вычисление завершилось, но вердикт не определен"""

    exit_code = 4


# Ошибки конфигурации

class InvalidExponent(ConfigurationError):
    pass


class InvalidGrid(ConfigurationError):
    pass


class InvalidState(ConfigurationError):
    pass


class SingularPoint(ConfigurationError):
    """Вычисление запрошено в особой точке уравнения"""


# Численные ошибки

class NotFound(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class Ambiguous(NumericalError):
    pass


class NonTerminating(NumericalError):
    pass


class ProfileNotSampledDenselyEnough(NumericalError):
    pass


class NoRootInWindow(NumericalError):
    pass


class NoBoundState(NumericalError):
    pass


class NonFiniteDetected(NumericalError):
    pass


class GridTooSmall(NumericalError):
    pass


class ProfileExteriorUnavailable(NumericalError):
    pass


class WindowTooShort(NumericalError):
    pass


class NonlinearResidual(NumericalError):
    pass


class RhoBeyondGrid(NumericalError):
    pass


class NoCollapse(NumericalError):
    pass


class NoBounce(NumericalError):
    pass


class FitDegenerate(NumericalError):
    pass


class BracketInvalid(NumericalError):
    pass


class PredicateNoisy(NumericalError):
    pass


class InconclusiveBand(InconclusiveError):
    """Порог не локализован: внутри скобки остались неопределенные пробы"""

    def __init__(self, message: str, lower: float, upper: float, record: Any = None):
        super().__init__(message, {"lower": lower, "upper": upper})
        self.lower = lower
        self.upper = upper
        self.record = record
