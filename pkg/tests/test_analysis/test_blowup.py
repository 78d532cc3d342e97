"""
Тесты для подгонок вблизи разрушения
"""
import numpy as np
import pytest

from src.core.constants import derive_constants
from src.core.errors import ConfigurationError, FitDegenerate, NonlinearResidual, RhoBeyondGrid, WindowTooShort
from src.core.grid import FieldState, RadialGrid
from src.evolve.initial_data import homogeneous_data
from src.analysis.blowup import (
    blowup_curve_fit, default_modes, fit_blowup_rate, fit_eigenmode_expansion, rescaled_profile,
)
from src.analysis.report import FitModel
from src.spectrum.modes import u0_eigenfunction


def synthetic_trace(consts, T=0.5, c1=0.0, amplitude=None, decades=9, samples=600):
    """Трасса delta^{-alpha}(a + c1 delta) на геометрической сетке по delta"""
    delta = np.geomspace(1.0, 10.0 ** (-decades), samples)
    a = consts.a if amplitude is None else amplitude
    u = (a + c1 * delta) * delta ** (-consts.alpha_f)
    return np.column_stack((T - delta, u))


class TestFitBlowupRate:
    """Тесты для fit_blowup_rate"""

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_synthetic_trace(self, p):
        """Тест восстановления T и a на точном законе"""
        consts = derive_constants(p)
        report = fit_blowup_rate(synthetic_trace(consts, c1=0.2), consts)

        assert report.model is FitModel.RATE
        assert report["T"] == pytest.approx(0.5, abs=1e-8)
        assert report["a"] == pytest.approx(consts.a, rel=1e-6)
        assert report.samples >= 8

    def test_short_trace(self):
        """Тест отказа для трассы короче двух декад"""
        consts = derive_constants(3)
        with pytest.raises(WindowTooShort):
            fit_blowup_rate(synthetic_trace(consts, decades=1, samples=50), consts)

    def test_wrong_amplitude(self):
        """Тест отказа при амплитуде, отличной от a"""
        consts = derive_constants(3)
        with pytest.raises(NonlinearResidual):
            fit_blowup_rate(synthetic_trace(consts, amplitude=2.0 * consts.a), consts)


class TestRescaledProfile:
    """Тесты для rescaled_profile"""

    def setup_method(self):
        """Настройка для каждого теста"""
        self.consts = derive_constants(5)
        self.state = homogeneous_data(self.consts, 1.0, RadialGrid(r_max=2.0, N=32))

    def test_homogeneous(self):
        """Тест: однородное решение дает постоянный профиль a"""
        table = rescaled_profile(self.state, 1.0, self.consts)

        assert table.shape == (101, 2)
        np.testing.assert_allclose(table[:, 1], self.consts.a, rtol=1e-12)

    def test_errors(self):
        """Тест отказов: t >= T и выход за сетку"""
        with pytest.raises(ConfigurationError):
            rescaled_profile(self.state, 0.0, self.consts)
        with pytest.raises(RhoBeyondGrid):
            rescaled_profile(self.state, 3.0, self.consts)


class TestEigenmodeExpansion:
    """Тесты для разложения по модам U_0"""

    def _states(self, consts, T, c1, c2):
        grid = RadialGrid(r_max=1.0, N=128)
        xi1 = u0_eigenfunction(consts, -1)
        xi2 = u0_eigenfunction(consts, -3)
        states = []
        for delta in (0.2, 0.1):
            rho = grid.nodes / delta
            u = delta ** (-consts.alpha_f) * (consts.a + c1 * delta * xi1.evaluate(rho)
                                               + c2 * delta ** 3 * xi2.evaluate(rho))
            states.append(FieldState(grid=grid, t=T - delta, u=u, v=np.zeros_like(u)))
        return states

    def test_default_modes(self):
        """Тест: при p = 5 lambda_bar_0 совпадает с lambda_2"""
        assert [mode.lam for mode in default_modes(derive_constants(3))] == [-1.0, -3.0, -4.0]
        assert [mode.lam for mode in default_modes(derive_constants(5))] == [-1.0, -3.0]

    def test_recovers_coefficients(self):
        """Тест восстановления c1 и c2 при p = 3"""
        consts = derive_constants(3)
        report = fit_eigenmode_expansion(self._states(consts, 1.0, 0.5, 0.2), 1.0, consts)

        assert report["c1"] == pytest.approx(0.5, rel=1e-6)
        assert report["c2"] == pytest.approx(0.2, rel=1e-3)
        assert report["cbar0"] == pytest.approx(0.0, abs=1e-3)
        assert report.residual < 1e-8

    def test_critical_names(self):
        """Тест имен параметров при p = 5"""
        consts = derive_constants(5)
        report = fit_eigenmode_expansion(self._states(consts, 1.0, 0.3, 0.0), 1.0, consts)

        assert set(report.params) == {"c1", "cbar0", "T"}
        assert report["c1"] == pytest.approx(0.3, rel=1e-6)

    def test_no_states(self):
        """Тест отказа без состояний"""
        with pytest.raises(ConfigurationError):
            fit_eigenmode_expansion([], 1.0, derive_constants(3))


class TestBlowupCurve:
    """Тесты для кривой разрушения"""

    def test_parabolic_curve(self):
        """Тест: (a/u)^{1/alpha} + t = T + b r^2 восстанавливается точно"""
        consts = derive_constants(7)
        grid = RadialGrid(r_max=1.0, N=64)
        r = grid.nodes
        states = []
        for t in (0.9, 0.95):
            u = consts.a * (1.0 - t + 0.5 * r ** 2) ** (-consts.alpha_f)
            states.append(FieldState(grid=grid, t=t, u=u, v=np.zeros_like(u)))

        report = blowup_curve_fit(states, consts)

        assert report["T"] == pytest.approx(1.0, abs=1e-10)
        assert report["b"] == pytest.approx(0.5, rel=1e-9)

    def test_negative_center(self):
        """Тест отказа при u(t,0) <= 0"""
        grid = RadialGrid(r_max=1.0, N=16)
        state = FieldState(grid=grid, t=0.0, u=-np.ones(17), v=np.zeros(17))
        with pytest.raises(FitDegenerate):
            blowup_curve_fit([state], derive_constants(3))
