"""
Тесты для замкнутого спектра около U_0
"""
from fractions import Fraction

import numpy as np
import pytest

from src.core.constants import derive_constants
from src.core.errors import ConfigurationError, NonTerminating
from src.spectrum.modes import (
    Branch, recurrence_ratio, u0_eigenfunction, u0_spectrum, u0_truncation_residual,
)


class TestU0Spectrum:
    """Тесты для u0_spectrum"""

    def test_p3(self):
        """Тест lambda_k = 1 - 2k, lambda_bar_k = -4 - 2k при p = 3"""
        pairs = u0_spectrum(derive_constants(3), 2)

        assert [pair.lam for pair in pairs] == [1, -1, -3]
        assert [pair.lam_bar for pair in pairs] == [-4, -6, -8]
        assert pairs[0].is_gauge
        assert not pairs[1].is_gauge

    def test_p7_exact_fractions(self):
        """Тест точных дробей при p = 7"""
        pairs = u0_spectrum(derive_constants(7), 1)

        assert pairs[1].lam_bar == Fraction(-14, 3)
        assert isinstance(pairs[1].lam_bar, Fraction)

    def test_negative_kmax(self):
        """Тест отказа для k_max < 0"""
        with pytest.raises(ConfigurationError):
            u0_spectrum(derive_constants(3), -1)


class TestU0Eigenfunction:
    """Тесты для полиномиальных собственных функций"""

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_gauge_mode_is_constant(self, p):
        """Тест: lambda = 1 дает xi = 1"""
        mode = u0_eigenfunction(derive_constants(p), 1)

        assert mode.is_gauge
        assert mode.branch is Branch.PRIMARY
        assert mode.coeffs == (Fraction(1),)

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_first_decaying_mode(self, p):
        """Тест: lambda = -1 дает xi = 1 - (p+3)/(3(p-1)) rho^2"""
        mode = u0_eigenfunction(derive_constants(p), -1)

        assert len(mode.coeffs) == 2
        assert mode.coefficient(1) == pytest.approx(-(p + 3) / (3.0 * (p - 1)))
        assert mode.coefficient(5) == 0.0

    def test_p3_mode_values(self):
        """Тест значения xi = 1 - rho^2 при p = 3"""
        mode = u0_eigenfunction(derive_constants(3), -1.0)

        assert mode.evaluate(0.5) == pytest.approx(0.75)
        np.testing.assert_allclose(mode.evaluate([0.0, 1.0]), [1.0, 0.0], atol=1e-15)

    def test_barred_branch(self):
        """Тест ветви lambda_bar_0 = -4 при p = 3"""
        mode = u0_eigenfunction(derive_constants(3), -4)

        assert mode.branch is Branch.BARRED
        assert mode.coeffs == (Fraction(1),)

    @pytest.mark.parametrize("lam", [0.5, np.sqrt(2.0), Fraction(1, 3)])
    def test_non_terminating(self, lam):
        """Тест отказа вне спектра"""
        with pytest.raises(NonTerminating):
            u0_eigenfunction(derive_constants(3), lam, k_max=20)

    def test_truncation_residual(self):
        """Тест нуля квадратного многочлена в точке обрыва"""
        consts = derive_constants(5)

        assert u0_truncation_residual(consts, -3, 2) == 0
        assert u0_truncation_residual(consts, -3, 1) != 0

    def test_recurrence_ratio_tends_to_one(self):
        """Тест: отношение коэффициентов стремится к 1"""
        assert recurrence_ratio(derive_constants(3), 0.5, 10000) == pytest.approx(1.0, abs=1e-3)

    def test_table_header(self):
        """Тест заголовка таблицы моды"""
        table = u0_eigenfunction(derive_constants(3), -1).to_table()

        assert table.splitlines()[0] == "# lambda=-1 branch=primary xi(0)=1"
        assert len(table.splitlines()) == 1002
