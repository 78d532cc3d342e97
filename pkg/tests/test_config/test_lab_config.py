"""
Тесты для конфигурации запусков
"""
from pathlib import Path

import pytest
from pydantic import ValidationError

from src.config.lab_config import (
    AnalysisControls,
    BisectionControls,
    CampaignConfig,
    EvolutionControls,
    FamilyConfig,
    RunConfig,
    SpectrumControls,
)
from src.core.errors import ConfigurationError


class TestControls:
    """Тесты для отдельных секций"""

    def test_defaults(self):
        """Тест значений по умолчанию"""
        config = RunConfig()

        assert config.p == 3
        assert config.grid.N == 4096
        assert config.evolution.boundary == "isolated"
        assert config.bisection.depth == 40
        assert config.analysis.smoothing_kernel == 5

    def test_frozen_and_strict(self):
        """Тест: секции неизменяемы и не принимают неизвестных ключей"""
        controls = EvolutionControls()

        with pytest.raises(ValidationError):
            controls.t_max = 5.0
        with pytest.raises(ValidationError):
            EvolutionControls(tmax=5.0)

    def test_snapshot_times_sorted(self):
        """Тест: моменты снимков сортируются"""
        controls = EvolutionControls(snapshot_times=[0.5, 0.1, 0.3])

        assert controls.snapshot_times == [0.1, 0.3, 0.5]

    def test_negative_snapshot_rejected(self):
        """Тест: отрицательный момент снимка отклоняется"""
        with pytest.raises(ValidationError):
            EvolutionControls(snapshot_times=[-0.1])

    def test_threshold_separation(self):
        """Тест: u_stop должен быть много больше disp_floor"""
        with pytest.raises(ValidationError):
            EvolutionControls(u_stop=10.0, disp_floor=0.1)
        assert EvolutionControls(u_stop=1e7, disp_floor=1e-3).disp_floor == 1e-3

    def test_with_horizon(self):
        """Тест копии с растянутым горизонтом"""
        controls = EvolutionControls(t_max=10.0, cfl=0.5)
        longer = controls.with_horizon(1.5)

        assert longer.t_max == 15.0
        assert longer.cfl == 0.5
        assert controls.t_max == 10.0

    def test_custom_table_requires_path(self):
        """Тест: custom_table без файла отклоняется"""
        with pytest.raises(ValidationError):
            FamilyConfig(kind="custom_table")

    def test_even_smoothing_kernel(self):
        """Тест: окно сглаживания должно быть нечетным"""
        with pytest.raises(ValidationError):
            AnalysisControls(smoothing_kernel=4)

    def test_brackets(self):
        """Тест: границы скобок и окон упорядочены"""
        with pytest.raises(ValidationError):
            BisectionControls(lo=1.0, hi=0.5)
        with pytest.raises(ValidationError):
            SpectrumControls(window_lo=1.0, window_hi=-1.0)


class TestRunConfig:
    """Тесты для RunConfig"""

    def test_from_mapping(self):
        """Тест разбора ключей через точку"""
        config = RunConfig.from_mapping({"p": 5, "grid.N": 256, "evolution.t_max": 12.5})

        assert config.p == 5
        assert config.grid.N == 256
        assert config.grid.r_max == 16.0
        assert config.evolution.t_max == 12.5

    def test_even_p(self):
        """Тест: четный p - ошибка конфигурации"""
        with pytest.raises(ConfigurationError) as info:
            RunConfig.from_mapping({"p": 4})

        assert info.value.exit_code == 2
        assert "p" in info.value.message

    def test_unknown_key(self):
        """Тест: неизвестный ключ называется в сообщении"""
        with pytest.raises(ConfigurationError) as info:
            RunConfig.from_mapping({"grid.cells": 100})

        assert "grid.cells: неизвестный ключ" in info.value.message

    def test_out_of_range(self):
        """Тест: значение вне диапазона"""
        with pytest.raises(ConfigurationError):
            RunConfig.from_mapping({"grid.N": 8})

    def test_from_file_with_overrides(self, tmp_path):
        """Тест: флаги побеждают файл, None не переопределяет"""
        path = tmp_path / "lab.conf"
        path.write_text(
            "# запуск\n"
            "p = 5\n"
            "grid.N = 512\n"
            "evolution.snapshot_times = [0.2, 0.1]\n",
            encoding="utf-8",
        )

        config = RunConfig.from_file(str(path), {"grid.N": 1024, "p": None})

        assert config.p == 5
        assert config.grid.N == 1024
        assert config.evolution.snapshot_times == [0.1, 0.2]

    def test_missing_file(self, tmp_path):
        """Тест: отсутствующий файл"""
        with pytest.raises(ConfigurationError):
            RunConfig.from_file(str(tmp_path / "missing.conf"))

    def test_provenance_lines(self):
        """Тест: провенанс перечисляет всю эффективную конфигурацию"""
        lines = RunConfig.from_mapping({"p": 7}).provenance_lines()

        assert lines == sorted(lines)
        assert "p = 7" in lines
        assert "grid.N = 4096" in lines
        assert "evolution.disp_floor = null" in lines
        assert "evolution.snapshot_times = []" in lines
        assert 'family.kind = "gauss4"' in lines


class TestShippedConfigs:
    """Тесты для файлов из каталога config/"""

    ROOT = Path(__file__).resolve().parents[2] / "config"

    def test_run_conf(self):
        """Тест: пример конфигурации запуска проходит проверку"""
        config = RunConfig.from_file(str(self.ROOT / "run.conf"))

        assert config.family.kind == "gauss4"
        assert config.evolution.snapshot_amplitudes == [1e3, 1e4, 1e5]

    def test_campaign_yaml(self):
        """Тест: пример манифеста кампании проходит проверку"""
        campaign = CampaignConfig.from_yaml(str(self.ROOT / "campaign.yaml"))

        assert [entry.name for entry in campaign.entries][:2] == ["p7_gauss4", "p3_center"]
        assert campaign.entries[1].bisection.target == "A_0"
