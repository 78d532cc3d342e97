"""
Общие фикстуры для тестов харнесса
"""
import pytest

from src.config.lab_config import BisectionControls, EvolutionControls
from src.core.constants import derive_constants
from src.core.grid import RadialGrid
from src.evolve.integrator import Verdict
from src.harness.bisection import ProbeRunner
from src.harness.classify import ClassifyResult
from src.harness.families import FamilyKind, InitialDataFamily


def make_classifier(verdict_of, r_S_of=lambda amplitude: 0.0):
    """Классификатор без эволюции: вердикт и r_S задаются функциями амплитуды"""
    calls = []

    def classifier(family, amplitude, grid, controls, consts, run_id=None):
        calls.append((amplitude, controls.t_max))
        verdict = verdict_of(amplitude)
        r_S = r_S_of(amplitude) if verdict is Verdict.BLOWUP else 0.0
        return ClassifyResult(verdict=verdict, amplitude=amplitude, r_S=r_S)

    classifier.calls = calls
    return classifier


@pytest.fixture
def runner_factory():
    """Фабрика ProbeRunner с подменным классификатором"""
    def factory(classifier, **bisection):
        return ProbeRunner(
            family=InitialDataFamily(kind=FamilyKind.GAUSS4),
            grid=RadialGrid(r_max=1.0, N=16),
            evolution=EvolutionControls(t_max=10.0),
            consts=derive_constants(3),
            bisection=BisectionControls(**bisection),
            classifier=classifier,
        )

    return factory
