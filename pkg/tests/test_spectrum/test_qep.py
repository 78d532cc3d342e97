"""
Тесты для квадратичной задачи на собственные значения
"""
import numpy as np
import pytest

from src.config.lab_config import SpectrumControls
from src.core.constants import derive_constants
from src.core.errors import NoRootInWindow, ProfileNotSampledDenselyEnough
from src.profiles.shooting import SimilarityProfile
from src.spectrum.qep import QuadraticEigenproblem, qep_spectrum


class TestQuadraticEigenproblem:
    """Тесты для QuadraticEigenproblem"""

    def test_sparse_profile_rejected(self):
        """Тест отказа для редкой таблицы профиля"""
        profile = SimilarityProfile.constant(derive_constants(3), spacing=0.01)
        with pytest.raises(ProfileNotSampledDenselyEnough):
            QuadraticEigenproblem(profile)

    def test_empty_window(self):
        """Тест отказа для пустого окна"""
        profile = SimilarityProfile.constant(derive_constants(7))
        with pytest.raises(NoRootInWindow):
            qep_spectrum(profile, window=(1.0, -1.0))

    @pytest.mark.slow
    def test_constant_profile_recovers_closed_form(self):
        """Тест: численный спектр U_0 при p = 7 совпадает с замкнутым"""
        profile = SimilarityProfile.constant(derive_constants(7))
        modes = qep_spectrum(profile, window=(-3.5, 1.5), controls=SpectrumControls(points_per_unit=100))

        np.testing.assert_allclose([mode.lam for mode in modes], [1.0, -1.0, -8.0 / 3.0, -3.0], atol=1e-6)
        assert modes[0].is_gauge
