"""
Тесты для уравнения профиля и его разложений
"""
import numpy as np
import pytest

from src.core.constants import derive_constants
from src.core.errors import SingularPoint
from src.profiles.similarity import (
    interior_series, kw_integral, lightcone_series, lightcone_taylor,
    parabolic_ode_residual, profile_rhs,
)


class TestProfileEquation:
    """Тесты для правой части уравнения профиля"""

    @pytest.mark.parametrize("rho", [0.0, 1.0])
    def test_singular_points(self, rho):
        """Тест отказа в особых точках"""
        with pytest.raises(SingularPoint):
            profile_rhs(rho, 1.0, 0.0, derive_constants(3))

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_constant_solution(self, p):
        """Тест: U = a решает уравнение профиля"""
        consts = derive_constants(p)
        assert profile_rhs(0.4, consts.a, 0.0, consts) == pytest.approx(0.0, abs=1e-12)
        assert profile_rhs(1.7, consts.a, 0.0, consts) == pytest.approx(0.0, abs=1e-12)

    def test_interior_series_at_center(self):
        """Тест регулярного ряда: U(0) = c, U'(0) = 0"""
        U, Up = interior_series(0.9, 0.0, derive_constants(3))

        assert U == 0.9
        assert Up == 0.0


class TestLightconeSeries:
    """Тесты для разложения у светового конуса"""

    @pytest.mark.parametrize("p,b", [(3, 1.3), (5, 0.8), (7, 2.0)])
    def test_taylor_matches_first_order(self, p, b):
        """Тест совпадения первых коэффициентов с lightcone_series (s = 1 - rho)"""
        consts = derive_constants(p)
        coeffs = lightcone_taylor(b, consts, order=6)
        value, slope = lightcone_series(b, 1.0, consts)

        assert coeffs[0] == pytest.approx(value)
        assert coeffs[1] == pytest.approx(-slope, rel=1e-12)

    def test_constant_b_gives_constant_series(self):
        """Тест: для b = a все старшие коэффициенты равны нулю"""
        consts = derive_constants(3)
        coeffs = lightcone_taylor(consts.a, consts, order=10)

        np.testing.assert_allclose(coeffs[1:], 0.0, atol=1e-12)


class TestInvariants:
    """Тесты для интеграла Кавиана-Вайсслера и параболического профиля"""

    def test_kw_integral_vanishes_on_constant_profile(self):
        """Тест: при p = 5 интеграл равен нулю на U = a"""
        consts = derive_constants(5)
        rho = np.linspace(0.0, 0.99, 50)
        q = kw_integral(rho, np.full_like(rho, consts.a), np.zeros_like(rho), consts)

        np.testing.assert_allclose(q, 0.0, atol=1e-14)

    def test_kw_integral_scalar(self):
        """Тест скалярного результата"""
        assert isinstance(kw_integral(0.5, 1.0, 0.0, derive_constants(5)), float)

    @pytest.mark.parametrize("p", [3, 5, 7])
    @pytest.mark.parametrize("b", [0.2, 1.0, 3.5])
    def test_parabolic_profile_exact(self, p, b):
        """Тест: a/(1 + b z^2)^alpha точно решает ОДУ коллапса"""
        z = np.linspace(0.0, 5.0, 41)
        residual = parabolic_ode_residual(z, b, derive_constants(p))

        np.testing.assert_allclose(residual, 0.0, atol=1e-10)
