"""
Тесты для бисекции по параметру семейства
"""
import pytest

from src.core.errors import BracketInvalid, InconclusiveBand, PredicateNoisy
from src.evolve.integrator import Verdict
from src.harness.bisection import A0Branch, BisectionTarget, bisect_threshold, locate_A0, tune_b_zero

from .conftest import make_classifier


def threshold_at(value):
    return lambda a: Verdict.BLOWUP if a >= value else Verdict.DISPERSAL


def always_blowup(a):
    return Verdict.BLOWUP


def banded(a):
    if 0.25 <= a <= 0.35:
        return Verdict.INCONCLUSIVE
    return Verdict.BLOWUP if a > 0.35 else Verdict.DISPERSAL


def inverted(a):
    if a == 0.5:
        return Verdict.INCONCLUSIVE
    if a == 0.75 or a < 0.2:
        return Verdict.DISPERSAL
    return Verdict.BLOWUP


class TestBisectThreshold:
    """Тесты для bisect_threshold"""

    def test_converges_to_threshold(self, runner_factory):
        """Тест: скобка сжимается к порогу до 2^-depth"""
        runner = runner_factory(make_classifier(threshold_at(0.3)))

        record = bisect_threshold(runner, 0.0, 1.0, depth=12)

        lo, hi = record.final
        assert lo < 0.3 <= hi
        assert hi - lo <= 2.0 ** -12
        assert record.target is BisectionTarget.A_STAR
        assert not record.non_monotone
        widths = [step.width for step in record.brackets]
        assert widths == sorted(widths, reverse=True)
        assert record.brackets[0].verdict_lo == "dispersal"
        assert record.brackets[0].verdict_hi == "blowup"

    def test_horizon_grows_with_level(self, runner_factory):
        """Тест: t_max растет на глубоких уровнях"""
        classifier = make_classifier(threshold_at(0.3))
        runner = runner_factory(classifier)

        bisect_threshold(runner, 0.0, 1.0, depth=12)

        horizons = {t_max for _, t_max in classifier.calls}
        assert horizons == {10.0, 15.0}

    def test_controls_at(self, runner_factory):
        """Тест расписания t_max"""
        runner = runner_factory(make_classifier(always_blowup))

        assert runner.controls_at(9).t_max == 10.0
        assert runner.controls_at(10).t_max == 15.0
        assert runner.controls_at(20).t_max == pytest.approx(22.5)

    def test_bracket_invalid(self, runner_factory):
        """Тест: концы скобки должны иметь противоположные вердикты"""
        runner = runner_factory(make_classifier(threshold_at(0.3)))

        with pytest.raises(BracketInvalid) as info:
            bisect_threshold(runner, 0.5, 1.0, depth=4)
        assert info.value.details["verdict_lo"] == "blowup"

        with pytest.raises(BracketInvalid):
            bisect_threshold(runner, 1.0, 0.5, depth=4)

    def test_inconclusive_band(self, runner_factory):
        """Тест: полоса неопределенных проб дает интервал вместо порога"""
        runner = runner_factory(make_classifier(banded))

        with pytest.raises(InconclusiveBand) as info:
            bisect_threshold(runner, 0.0, 1.0, depth=20)

        error = info.value
        assert error.exit_code == 4
        assert error.details["lower"] == 0.234375
        assert error.details["upper"] == 0.375
        assert error.record.final == (0.234375, 0.375)
        assert 0.25 in error.record.inconclusive

    def test_inconclusive_mid_uses_quarters(self, runner_factory):
        """Тест: неопределенная середина заменяется пробами на четвертях"""
        runner = runner_factory(make_classifier(inverted))

        record = bisect_threshold(runner, 0.0, 1.0, depth=10)

        assert record.non_monotone
        assert 0.5 in record.inconclusive
        assert record.brackets[1].lo == 0.0
        assert record.brackets[1].hi == 0.25
        lo, hi = record.final
        assert lo < 0.2 <= hi

    def test_log_and_probe_table(self, runner_factory):
        """Тест текстового журнала и сводки проб"""
        runner = runner_factory(make_classifier(threshold_at(0.3)))

        record = bisect_threshold(runner, 0.0, 1.0, depth=3)
        log = record.to_log().splitlines()
        table = record.probe_table().splitlines()

        assert log[0] == "# family=gauss4 target=A_star non_monotone=false"
        assert log[1] == "# level lo hi verdict_lo verdict_hi"
        assert log[2] == "0 0 1 dispersal blowup"
        assert len(log) == 2 + len(record.brackets)
        assert table[0] == "# amplitude verdict r_S T_est"
        assert table[1] == "0 dispersal 0 none"
        assert len(table) == 1 + len(record.probes)
        assert record.traces() == {}


class TestLocateA0:
    """Тесты для locate_A0 (h = 1/16)"""

    def test_continuous(self, runner_factory):
        """Тест: r_S стремится к нулю - непрерывная ветвь"""
        runner = runner_factory(make_classifier(always_blowup, lambda a: max(1.0 - a, 0.0)))

        result = locate_A0(runner, 0.0, 1.0, depth=12)

        assert result.A_0 == 0.9375
        assert result.branch is A0Branch.CONTINUOUS
        assert not result.degenerate
        assert result.r_S_ladder[0] == (0.0, 1.0)
        assert result.r_S_ladder[-1][1] == pytest.approx(0.0625, abs=1e-3)

    def test_jump(self, runner_factory):
        """Тест: r_S остается отделенным от нуля - скачок"""
        runner = runner_factory(make_classifier(always_blowup, lambda a: 0.5 if a < 0.7 else 0.0))

        result = locate_A0(runner, 0.0, 1.0, depth=12)

        assert result.A_0 == pytest.approx(0.7, abs=2.0 ** -12)
        assert result.branch is A0Branch.JUMP

    def test_degenerate(self, runner_factory):
        """Тест: разрушение в центре уже на нижней границе"""
        classifier = make_classifier(always_blowup, lambda a: 0.0)
        runner = runner_factory(classifier)

        result = locate_A0(runner, 0.2, 1.0)

        assert result.degenerate
        assert result.A_0 == 0.2
        assert len(classifier.calls) == 1

    def test_lower_end_must_blow_up(self, runner_factory):
        """Тест: рассеяние на нижней границе - неверная скобка"""
        runner = runner_factory(make_classifier(threshold_at(0.5)))

        with pytest.raises(BracketInvalid):
            locate_A0(runner, 0.0, 1.0, depth=4)

    def test_noisy_predicate(self, runner_factory):
        """Тест: инверсия предиката у сетки дает PredicateNoisy"""
        def r_S(a):
            if a == 0.75:
                return 0.1
            return 1.0 if a < 0.2 else 0.0

        runner = runner_factory(make_classifier(
            lambda a: Verdict.INCONCLUSIVE if a == 0.5 else Verdict.BLOWUP, r_S))

        with pytest.raises(PredicateNoisy):
            locate_A0(runner, 0.0, 1.0, depth=6)


class TestTuneBZero:
    """Тесты для tune_b_zero"""

    def test_marginal_results(self, runner_factory):
        """Тест: итоговая скобка хранит полные результаты на концах"""
        runner = runner_factory(make_classifier(always_blowup, lambda a: max(1.0 - a, 0.0)))

        record = tune_b_zero(runner, 0.0, 1.0, depth=8)

        assert record.target is BisectionTarget.B_ZERO
        below, above = record.marginal
        assert below.amplitude == record.final[0]
        assert above.amplitude == record.final[1]
        assert below.r_S > runner.grid.h >= above.r_S
