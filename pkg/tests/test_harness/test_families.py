"""
Тесты для семейств начальных данных
"""
import numpy as np
import pytest

from src.config.lab_config import FamilyConfig
from src.core.constants import derive_constants
from src.core.errors import ConfigurationError
from src.core.grid import RadialGrid
from src.evolve.initial_data import gauss4_data, homogeneous_data
from src.harness.families import FamilyKind, InitialDataFamily
from src.profiles.shooting import SimilarityProfile


class TestInitialDataFamily:
    """Тесты для InitialDataFamily"""

    def setup_method(self):
        """Настройка для каждого теста"""
        self.grid = RadialGrid(r_max=4.0, N=32)
        self.consts = derive_constants(3)

    def test_from_config(self):
        """Тест создания из конфигурации"""
        family = InitialDataFamily.from_config(FamilyConfig(kind="gauss4", sigma=0.5, R=1.0))

        assert family.kind is FamilyKind.GAUSS4
        assert family.name == "gauss4"
        assert family.to_dict() == {"kind": "gauss4", "name": "gauss4", "sigma": 0.5, "R": 1.0}

    def test_gauss4(self):
        """Тест построения gauss4"""
        family = InitialDataFamily(kind=FamilyKind.GAUSS4, sigma=0.5, R=1.0)
        state = family.build(0.3, self.grid, self.consts)

        np.testing.assert_array_equal(state.u, gauss4_data(0.3, 0.5, 1.0, self.grid).u)

    def test_static_family_requires_p5(self):
        """Тест: mode_perturbed_static только при p = 5"""
        family = InitialDataFamily(kind=FamilyKind.MODE_PERTURBED_STATIC)
        with pytest.raises(ConfigurationError):
            family.build(1e-3, self.grid, self.consts)

    def test_selfsim_seed_scales(self):
        """Тест: параметр selfsim_seed умножает (u, u_t)"""
        family = InitialDataFamily(kind=FamilyKind.SELFSIM_SEED, profile_n=0, blowup_time=2.0,
                                   profile=SimilarityProfile.constant(self.consts))
        state = family.build(1.5, self.grid, self.consts)
        reference = homogeneous_data(self.consts, 2.0, self.grid)

        np.testing.assert_allclose(state.u, 1.5 * reference.u, rtol=1e-12)
        np.testing.assert_allclose(state.v, 1.5 * reference.v, rtol=1e-12)

    def test_custom_table_scales(self, tmp_path):
        """Тест: параметр custom_table умножает табличные данные"""
        reference = homogeneous_data(self.consts, 1.0, self.grid)
        path = tmp_path / "seed.txt"
        path.write_text(reference.to_table(3), encoding="utf-8")
        family = InitialDataFamily.from_config(FamilyConfig(kind="custom_table", table_path=str(path)), name="seed")

        state = family.build(-2.0, self.grid, self.consts)

        assert family.name == "seed"
        np.testing.assert_allclose(state.u, -2.0 * reference.u)
