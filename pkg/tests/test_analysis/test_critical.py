"""
Тесты для диагностики вблизи порога
"""
import numpy as np
import pytest

from src.core.constants import derive_constants
from src.core.errors import ConfigurationError, FitDegenerate, NoBounce, WindowTooShort
from src.core.grid import FieldState, RadialGrid
from src.evolve.initial_data import homogeneous_data
from src.analysis.critical import (
    bounce_diagnostics, critical_departure_fit, departure_time, departure_time_slope,
    match_self_similar, match_static_orbit,
)
from src.profiles.shooting import SimilarityProfile
from src.spectrum.static import static_solution_family


class TestBounce:
    """Тесты для bounce_diagnostics"""

    def test_oscillating_trace(self):
        """Тест: t1 - первый максимум max|u|, t2 - следующий минимум"""
        t = np.linspace(0.0, 10.0, 1001)
        amplitude = 2.0 + np.sin(t)
        trace = np.column_stack((t, amplitude, amplitude))

        bounce = bounce_diagnostics(trace)

        assert bounce.t1 == pytest.approx(np.pi / 2.0, abs=0.02)
        assert bounce.t2 == pytest.approx(3.0 * np.pi / 2.0, abs=0.02)

    def test_no_return(self):
        """Тест: t2 = None, если возврата нет"""
        t = np.linspace(0.0, 3.0, 301)
        amplitude = 2.0 + np.sin(t)
        bounce = bounce_diagnostics(np.column_stack((t, amplitude)))

        assert bounce.t1 == pytest.approx(np.pi / 2.0, abs=0.02)
        assert bounce.t2 is None

    def test_monotone(self):
        """Тест отказа для монотонной трассы"""
        t = np.linspace(0.0, 1.0, 101)
        with pytest.raises(NoBounce):
            bounce_diagnostics(np.column_stack((t, 1.0 + t, 1.0 + t)))


class TestCriticalDeparture:
    """Тесты для отхода от критического решения"""

    def setup_method(self):
        """Настройка для каждого теста"""
        self.consts = derive_constants(3)
        self.profile = SimilarityProfile.constant(self.consts)
        self.U0 = self.consts.a
        self.lambda1 = 0.8

    def _trace(self, C, T=1.0):
        delta = np.geomspace(1.0, 1e-6, 400)
        u = delta ** (-self.consts.alpha_f) * (self.U0 + C * delta ** (-self.lambda1))
        return np.column_stack((T - delta, u))

    def test_opposite_branches(self):
        """Тест общего T и противоположных знаков C"""
        reports = critical_departure_fit([self._trace(1e-4), self._trace(-1e-4)],
                                         self.profile, self.lambda1, self.consts)

        assert len(reports) == 2
        assert reports[0]["T"] == pytest.approx(1.0, abs=1e-8)
        assert reports[0]["C"] == pytest.approx(1e-4, rel=1e-4)
        assert reports[1]["C"] == pytest.approx(-1e-4, rel=1e-4)
        assert reports[0]["U0"] == pytest.approx(self.U0)

    def test_invalid_arguments(self):
        """Тест отказов для пустого набора и lambda1 <= 0"""
        with pytest.raises(ConfigurationError):
            critical_departure_fit([], self.profile, self.lambda1, self.consts)
        with pytest.raises(ConfigurationError):
            critical_departure_fit([self._trace(1e-4)], self.profile, 0.0, self.consts)

    def test_departure_time(self):
        """Тест момента отхода на 30%"""
        t = np.linspace(0.0, 0.999, 1000)
        delta = 1.0 - t
        u = self.U0 / delta * (1.0 + 0.01 / delta)
        trace = np.column_stack((t, u))

        assert departure_time(trace, 1.0, self.U0, self.consts) == pytest.approx(0.967, abs=1e-9)
        with pytest.raises(FitDegenerate):
            departure_time(trace, 1.0, self.U0, self.consts, threshold=100.0)

    def test_departure_time_slope(self):
        """Тест наклона 1/lambda1 по -ln|A - A*|"""
        gaps = np.array([1e-2, 1e-3, 1e-4, 1e-5])
        times = 0.5 * (-np.log(gaps)) + 3.0

        report = departure_time_slope(1.0 + gaps, times, 1.0)

        assert report["slope"] == pytest.approx(0.5)
        assert report["lambda1"] == pytest.approx(2.0)
        assert report["intercept"] == pytest.approx(3.0)

    def test_departure_time_slope_errors(self):
        """Тест отказов: мало точек и A = A*"""
        with pytest.raises(WindowTooShort):
            departure_time_slope([1.1, 1.2], [1.0, 2.0], 1.0)
        with pytest.raises(FitDegenerate):
            departure_time_slope([1.0, 1.1, 1.2], [1.0, 2.0, 3.0], 1.0)


class TestAttractorMatching:
    """Тесты для сравнения с автомодельным и статическим решениями"""

    def test_self_similar_match(self):
        """Тест: однородное решение совпадает с постоянным профилем"""
        consts = derive_constants(3)
        state = homogeneous_data(consts, 1.0, RadialGrid(r_max=2.0, N=32))
        report = match_self_similar(state, SimilarityProfile.constant(consts), 1.0, consts)

        assert report.residual == pytest.approx(0.0, abs=1e-12)
        assert report["max_deviation"] == pytest.approx(0.0, abs=1e-12)

    def test_static_orbit(self):
        """Тест восстановления масштаба L"""
        grid = RadialGrid(r_max=4.0, N=100)
        u = static_solution_family(4.0, grid.nodes)
        state = FieldState(grid=grid, t=0.0, u=u, v=np.zeros_like(u))

        report = match_static_orbit(state, r_window=4.0)

        assert report["L"] == pytest.approx(4.0, rel=1e-8)
        assert report.residual < 1e-10

    def test_static_orbit_negative_center(self):
        """Тест отказа при u(0) <= 0"""
        grid = RadialGrid(r_max=4.0, N=16)
        state = FieldState(grid=grid, t=0.0, u=-np.ones(17), v=np.zeros(17))
        with pytest.raises(FitDegenerate):
            match_static_orbit(state, r_window=2.0)
