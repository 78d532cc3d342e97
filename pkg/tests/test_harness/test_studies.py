"""
Тесты для исследований критических решений
"""
import pytest

from src.analysis.report import FitModel, FitReport
from src.config.lab_config import EvolutionControls
from src.core.constants import derive_constants
from src.core.errors import ConfigurationError
from src.core.grid import RadialGrid
from src.evolve.integrator import Verdict
from src.harness.bisection import ProbeRunner
from src.harness.families import FamilyKind, InitialDataFamily
from src.harness.studies import StudyReport, bounce_return_study, static_critical_study

from .conftest import make_classifier


class TestStudyReport:
    """Тесты для StudyReport"""

    def test_to_key_value(self):
        """Тест: значения и подгонки в одном блоке key = value"""
        report = StudyReport(name="static_critical", values={"lambda1": 1.5, "dichotomy": True})
        report.fits["rate"] = FitReport(model=FitModel.RATE, params={"rate": 1.5}, residual=0.0,
                                        window=(0.0, 1.0), samples=10)

        lines = report.to_key_value().splitlines()

        assert lines[0] == "study = static_critical"
        assert "dichotomy = true" in lines
        assert "rate.params.rate = 1.5" in lines
        assert "rate.model = rate" in lines


class TestStaticCriticalStudy:
    """Тесты для static_critical_study"""

    def make_runner(self, p, kind):
        return ProbeRunner(
            family=InitialDataFamily(kind=kind),
            grid=RadialGrid(r_max=4.0, N=32),
            evolution=EvolutionControls(),
            consts=derive_constants(p),
            classifier=make_classifier(lambda a: Verdict.BLOWUP),
        )

    def test_requires_p5(self):
        """Тест: исследование только при p = 5"""
        with pytest.raises(ConfigurationError):
            static_critical_study(self.make_runner(3, FamilyKind.MODE_PERTURBED_STATIC))

    def test_requires_static_family(self):
        """Тест: исследование только для mode_perturbed_static"""
        with pytest.raises(ConfigurationError):
            static_critical_study(self.make_runner(5, FamilyKind.GAUSS4))


class TestBounceReturnStudy:
    """Тесты для bounce_return_study"""

    def test_without_outcomes(self):
        """Тест: пробы без эволюции дают пустые t1, t2"""
        classifier = make_classifier(lambda a: Verdict.BLOWUP)
        runner = ProbeRunner(
            family=InitialDataFamily(kind=FamilyKind.GAUSS4),
            grid=RadialGrid(r_max=4.0, N=32),
            evolution=EvolutionControls(),
            consts=derive_constants(3),
            classifier=classifier,
        )

        report = bounce_return_study(runner, [0.5, 0.7, 0.6])
        lines = report.tables["bounce"].splitlines()

        assert [a for a, _ in classifier.calls] == [0.7, 0.6, 0.5]
        assert lines[0] == "# amplitude verdict t1 t2"
        assert lines[1] == "0.69999999999999996 blowup none none"
        assert report.values["t2_increasing"] is False
        assert "t1_spread" not in report.values
