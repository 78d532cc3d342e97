"""
Тесты для иерархии исключений
"""
import pytest

from src.core.errors import (
    ConfigurationError, FitDegenerate, GridTooSmall, InconclusiveBand,
    InconclusiveError, InvalidGrid, LabError, NumericalError,
)


class TestErrors:
    """Тесты кодов завершения"""

    @pytest.mark.parametrize("cls,code", [
        (InvalidGrid, 2),
        (GridTooSmall, 3),
        (FitDegenerate, 3),
    ])
    def test_exit_codes(self, cls, code):
        """Тест кода завершения по классу ошибки"""
        error = cls("сбой", {"key": 1})

        assert error.exit_code == code
        assert isinstance(error, LabError)
        assert error.to_dict()["error"] == cls.__name__
        assert error.to_dict()["details"] == {"key": 1}

    def test_hierarchy(self):
        """Тест принадлежности к базовым категориям"""
        assert issubclass(InvalidGrid, ConfigurationError)
        assert issubclass(GridTooSmall, NumericalError)

    def test_inconclusive_band(self):
        """Тест границ неопределенной полосы"""
        error = InconclusiveBand("полоса", lower=0.1, upper=0.2, record="rec")

        assert isinstance(error, InconclusiveError)
        assert error.exit_code == 4
        assert error.details == {"lower": 0.1, "upper": 0.2}
        assert error.record == "rec"
