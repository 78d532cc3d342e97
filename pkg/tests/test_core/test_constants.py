"""
Тесты для ModelConstants
"""
from fractions import Fraction

import numpy as np
import pytest

from src.core.constants import Criticality, derive_constants, homogeneous_solution
from src.core.errors import ConfigurationError, InvalidExponent


class TestDeriveConstants:
    """Тесты для derive_constants"""

    @pytest.mark.parametrize("p", [3, 5, 7, 9])
    def test_exact_relations(self, p):
        """Тест точных соотношений alpha(p-1) = 2 и a^{p-1}(p-1)^2 = 2(p+1)"""
        consts = derive_constants(p)

        assert consts.alpha * (p - 1) == 2
        assert consts.a ** (p - 1) * (p - 1) ** 2 == pytest.approx(2 * (p + 1), rel=1e-14)
        assert consts.beta == Fraction(p - 5, p - 1)

    def test_known_values(self):
        """Тест значений для p = 3, 5, 7"""
        assert derive_constants(3).a == pytest.approx(np.sqrt(2.0), rel=1e-15)
        assert derive_constants(5).a == pytest.approx(0.75 ** 0.25, rel=1e-15)
        assert derive_constants(7).a == pytest.approx((4.0 / 9.0) ** (1.0 / 6.0), rel=1e-15)
        assert derive_constants(3).alpha == 1
        assert derive_constants(7).alpha == Fraction(1, 3)

    def test_criticality(self):
        """Тест классификации по знаку beta"""
        assert derive_constants(3).criticality is Criticality.SUBCRITICAL
        assert derive_constants(5).criticality is Criticality.CRITICAL
        assert derive_constants(7).criticality is Criticality.SUPERCRITICAL

    def test_lambda_bar0(self):
        """Тест lambda_bar_0 = -2(p+1)/(p-1)"""
        assert derive_constants(3).lambda_bar0 == -4
        assert derive_constants(5).lambda_bar0 == -3
        assert derive_constants(7).lambda_bar0 == Fraction(-8, 3)
        assert derive_constants(3).gauge_eigenvalue == 1

    @pytest.mark.parametrize("p", [4, 2, 1, -3, 0])
    def test_invalid_integer_exponent(self, p):
        """Тест отказа для четных и малых p"""
        with pytest.raises(InvalidExponent):
            derive_constants(p)

    @pytest.mark.parametrize("p", [3.0, "3", True])
    def test_non_integer_exponent(self, p):
        """Тест отказа для нецелых p"""
        with pytest.raises(InvalidExponent) as exc_info:
            derive_constants(p)
        assert isinstance(exc_info.value, ConfigurationError)
        assert exc_info.value.exit_code == 2

    def test_to_dict(self):
        """Тест сериализации"""
        data = derive_constants(7).to_dict()

        assert data["p"] == 7
        assert data["alpha"] == "1/3"
        assert data["criticality"] == "supercritical"


class TestHomogeneousSolution:
    """Тесты для однородного решения"""

    def test_values(self):
        """Тест u = a(T-t)^{-alpha}, u_t = alpha u/(T-t)"""
        consts = derive_constants(3)
        u, v = homogeneous_solution(consts, 1.0, 0.0)

        assert u == pytest.approx(np.sqrt(2.0))
        assert v == pytest.approx(np.sqrt(2.0))

    def test_satisfies_ode(self):
        """Тест u_tt = u^p для однородного решения"""
        consts = derive_constants(5)
        T, t, dt = 1.0, 0.3, 1e-4
        u_minus, _ = homogeneous_solution(consts, T, t - dt)
        u, _ = homogeneous_solution(consts, T, t)
        u_plus, _ = homogeneous_solution(consts, T, t + dt)

        u_tt = (u_plus - 2.0 * u + u_minus) / dt ** 2
        assert u_tt == pytest.approx(u ** 5, rel=1e-6)
