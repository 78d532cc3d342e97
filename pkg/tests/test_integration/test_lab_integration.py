"""
Интеграционные тесты для BlowupLab
"""
import numpy as np
import pytest

from src.config.lab_config import RunConfig
from src.core.errors import ConfigurationError
from src.evolve.integrator import Verdict
from src.harness.bisection import BisectionRecord, BisectionTarget, BracketStep
from src.harness.campaign import CampaignRow
from src.main import BlowupLab
from src.utils.formatter import OutputFormatter


def make_lab(tmp_path, **flat):
    config = RunConfig.from_mapping({"output_dir": str(tmp_path), "verbosity": "ERROR", **flat})
    return BlowupLab(config)


def body_lines(path):
    return [line for line in path.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]


class TestBlowupLab:
    """Интеграционные тесты лаборатории"""

    def test_closed_form_spectrum(self, tmp_path):
        """Тест таблицы спектра около U_0 с провенансом"""
        lab = make_lab(tmp_path, p=5, **{"spectrum.kmax": 2})

        rows = lab.closed_form_spectrum()

        assert [row["lambda_bar"] for row in rows] == [-3, -5, -7]
        text = (tmp_path / "u0_spectrum_p5.txt").read_text(encoding="utf-8")
        assert "# p = 5\n" in text
        assert "# k lambda lambda_bar\n" in text
        assert body_lines(tmp_path / "u0_spectrum_p5.txt") == ["0 1 -3", "1 -1 -5", "2 -3 -7"]

    def test_rate_fit_from_trace_file(self, tmp_path):
        """Тест подгонки скорости по сохраненной трассе"""
        lab = make_lab(tmp_path, p=3)
        T = 2.0
        t = T - np.geomspace(1.0, 1e-9, 600)
        u = lab.consts.a * (T - t) ** (-lab.consts.alpha_f)
        trace = tmp_path / "trace.txt"
        trace.write_text(OutputFormatter.format_rows(zip(t, u), header=["t", "u_center"]), encoding="utf-8")

        reports = lab.fit("rate", traces=[str(trace)])

        assert reports[0]["T"] == pytest.approx(T, abs=1e-6)
        assert (tmp_path / "fit_rate_p3.txt").exists()

    def test_fit_needs_blowup_time(self, tmp_path):
        """Тест: без T и без трассы подгонка мод невозможна"""
        lab = make_lab(tmp_path)

        with pytest.raises(ConfigurationError):
            lab.fit("eigenmode")

    def test_bound_state_requires_p5(self, tmp_path):
        """Тест: связанное состояние только при p = 5"""
        with pytest.raises(ConfigurationError):
            make_lab(tmp_path, p=7).bound_state()

    def test_threshold_artifacts(self, tmp_path, mocker):
        """Тест: сводка и журналы бисекции пишутся в каталог вывода"""
        record = BisectionRecord(family="gauss4", target=BisectionTarget.A_STAR, final=(0.25, 0.5),
                                 brackets=[BracketStep(0, 0.0, 1.0, "dispersal", "blowup"),
                                           BracketStep(1, 0.0, 0.5, "dispersal", "blowup")])
        run = mocker.patch("src.main.run_campaign", return_value=[
            CampaignRow(family="gauss4", A_star_lo=0.25, A_star_hi=0.5, record=record)])
        lab = make_lab(tmp_path, jobs=2, **{"bisection.lo": 0.0, "bisection.hi": 1.0})

        rows = lab.threshold()

        campaign, jobs = run.call_args.args
        assert jobs == 2
        assert campaign.entries[0].name == "gauss4"
        assert rows[0].A_star_hi == 0.5
        assert body_lines(tmp_path / "threshold_summary.txt") == ["gauss4 0.25 0.5 none none"]
        assert body_lines(tmp_path / "bisection_gauss4.txt")[-1] == "1 0 0.5 dispersal blowup"
        assert (tmp_path / "probes_gauss4.txt").exists()

    @pytest.mark.slow
    def test_selfsim_seed_evolution(self, tmp_path):
        """Тест: данные U_0 с T = 1 разрушаются при T = 1 и пишут трассу"""
        lab = make_lab(tmp_path, p=3, **{
            "family.kind": "selfsim_seed", "family.profile_n": 0, "family.blowup_time": 1.0,
            "family.amplitude": 1.0, "grid.N": 64, "grid.r_max": 4.0, "evolution.t_max": 2.0,
        })

        outcome = lab.evolve(label="seed")

        assert outcome.verdict is Verdict.BLOWUP
        assert outcome.T_est == pytest.approx(1.0, abs=1e-3)
        for name in ("seed_trace.txt", "seed_final.txt", "seed_summary.txt"):
            assert (tmp_path / name).exists()
        assert "verdict = blowup" in body_lines(tmp_path / "seed_summary.txt")

    @pytest.mark.slow
    def test_selfcheck(self, tmp_path):
        """Тест: все самопроверки проходят"""
        lab = make_lab(tmp_path, p=3)

        checks = lab.selfcheck()

        assert [c.name for c in checks if not c.passed] == []
        assert len(body_lines(tmp_path / "selfcheck.txt")) == len(checks)
        names = {c.name for c in checks}
        assert {"kw_conservation_p5", "p5_excited_profile_absent", "static_bound_state",
                "qep_constant_profile_p7", "energy_drift", "scaling_commutes_with_step",
                "self_convergence_order"} <= names
        assert len(checks) == 14

    @pytest.mark.slow
    def test_selfcheck_quick(self, tmp_path):
        """Тест: быстрый режим пропускает спектр и многосеточную эволюцию"""
        lab = make_lab(tmp_path, p=3)

        checks = lab.selfcheck(quick=True)

        assert len(checks) == 7
        assert "self_convergence_order" not in {c.name for c in checks}
        assert all(c.passed for c in checks)
