"""Theorem experiments on the reference models."""

import pytest

from sasakicheck.experiments import EXPERIMENTS, ExperimentConfig, UnknownExperimentError, run_experiment, run_experiments
from sasakicheck.runner import Model

CFG = ExperimentConfig(samples=10)


@pytest.fixture(scope="module")
def sphere_results():
    return {r.id: r for r in run_experiments(list(EXPERIMENTS), Model("spaceform", 2, 1.0), CFG)}


@pytest.fixture(scope="module")
def darboux_results():
    return {r.id: r for r in run_experiments(list(EXPERIMENTS), Model("darboux", 2), CFG)}


class TestUnitSphere:
    @pytest.fixture
    def results(self, sphere_results):
        return sphere_results

    def test_everything_consistent(self, results):
        assert all(r.consistent for r in results.values())

    def test_theorem_32_example(self, results):
        r = results["EXP-T3.2"]
        assert r.hypothesis_residual == 0.0 and r.conclusion_residual == 0.0

    def test_ricci_theorem_holds(self, results):
        assert results["EXP-T5.1"].hypothesis_holds and results["EXP-T5.1"].conclusion_holds


class TestDarboux:
    @pytest.fixture
    def results(self, darboux_results):
        return darboux_results

    def test_theorem_32_hypothesis_holds_identically(self, results):
        """The phi^2-projected xi-component vanishes on every Sasakian model."""
        r = results["EXP-T3.2"]
        assert r.hypothesis_holds is True
        assert r.conclusion_holds is False
        assert r.consistent is False

    def test_equivalences_consistent(self, results):
        for eid in ("EXP-T3.3", "EXP-T4.1", "EXP-T5.4", "EXP-T5.5", "EXP-T5.7"):
            assert results[eid].consistent is True


def test_conformal_experiments_na_in_dimension_three():
    r = run_experiment("EXP-T5.5", Model("spaceform", 1, 1.0), CFG)
    assert r.consistent is None and "not applicable" in r.note


def test_unknown_experiment():
    with pytest.raises(UnknownExperimentError):
        run_experiment("EXP-T9.9", Model("darboux", 1))
