"""
Тесты для параболического и квартичного коллапса
"""
import numpy as np
import pytest

from src.core.constants import derive_constants
from src.core.errors import ConfigurationError, NoCollapse
from src.core.grid import FieldState, RadialGrid
from src.analysis.collapse import (
    collapse_curve_table, collapse_model, parabolic_collapse, predicted_parabolic_b,
    predicted_quartic_d, quartic_collapse,
)


def collapsing_states(consts, coefficient, power, deltas=(0.1, 0.01), T=1.0, grid_width=None):
    """Состояния delta^{-alpha} a (1 + c r^power/delta^{width})^{-alpha}"""
    grid = RadialGrid(r_max=1.0, N=512)
    r = grid.nodes
    width = 1.0 if grid_width is None else grid_width
    states = []
    for delta in deltas:
        u = delta ** (-consts.alpha_f) * consts.a * (1.0 + coefficient * r ** power / delta ** width) ** (-consts.alpha_f)
        states.append(FieldState(grid=grid, t=T - delta, u=u, v=np.zeros_like(u)))
    return states


class TestPredictions:
    """Тесты для предсказаний b и d по коэффициентам мод"""

    def test_parabolic_b_p3(self):
        """Тест b = c1/(alpha a) при p = 3, где xi_1 = 1 - rho^2"""
        consts = derive_constants(3)
        assert predicted_parabolic_b(0.7, consts) == pytest.approx(0.7 / np.sqrt(2.0))

    def test_quartic_d_p3(self):
        """Тест d = -d23 c2/(alpha a), d23 = 1/5 при p = 3"""
        consts = derive_constants(3)
        assert predicted_quartic_d(1.0, consts) == pytest.approx(-0.2 / np.sqrt(2.0))

    def test_model(self):
        """Тест модели коллапса"""
        consts = derive_constants(5)
        assert collapse_model(np.array([0.0]), 1.0, 2, consts)[0] == pytest.approx(consts.a)
        assert collapse_model(np.array([1.0]), 3.0, 4, consts)[0] == pytest.approx(consts.a / 2.0)


class TestParabolicCollapse:
    """Тесты для parabolic_collapse"""

    def test_exact_collapse(self):
        """Тест восстановления b на точной параболической кривой"""
        consts = derive_constants(3)
        report = parabolic_collapse(collapsing_states(consts, 0.8, 2), 1.0, consts)

        assert report["b"] == pytest.approx(0.8, rel=1e-4)
        assert report["T"] == 1.0
        assert report.residual < 1e-4
        assert report.window == (0.0, 3.0)

    def test_wrong_scaling(self):
        """Тест: масштаб r/delta не коллапсирует на r/sqrt(delta)"""
        consts = derive_constants(3)
        states = collapsing_states(consts, 1.0, 2, grid_width=2.0)
        with pytest.raises(NoCollapse):
            parabolic_collapse(states, 1.0, consts)

    def test_state_count(self):
        """Тест отказа для одного состояния и близких delta"""
        consts = derive_constants(3)
        with pytest.raises(ConfigurationError):
            parabolic_collapse(collapsing_states(consts, 0.8, 2, deltas=(0.1,)), 1.0, consts)
        with pytest.raises(ConfigurationError):
            parabolic_collapse(collapsing_states(consts, 0.8, 2, deltas=(0.1, 0.08)), 1.0, consts)


class TestQuarticCollapse:
    """Тесты для quartic_collapse"""

    def test_exact_collapse(self):
        """Тест восстановления d на точной квартичной кривой"""
        consts = derive_constants(7)
        report = quartic_collapse(collapsing_states(consts, 0.5, 4), 1.0, consts)

        assert report["d"] == pytest.approx(0.5, rel=1e-4)
        assert report.residual < 1e-4

    def test_curve_table(self):
        """Тест таблицы кривых коллапса"""
        consts = derive_constants(7)
        table = collapse_curve_table(collapsing_states(consts, 0.5, 4), 1.0, consts, 0.5, power=4)
        lines = table.splitlines()

        assert lines[0] == "# z value_model value_data"
        assert lines[1].startswith("# t=0.90000000000000002 delta=")
        assert len(lines) == 1 + 2 * (1 + 121)
        z, model, data = (float(x) for x in lines[10].split())
        assert model == pytest.approx(data, rel=1e-6)
