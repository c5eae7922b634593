"""Corpus generator and battery tests: determinism, coverage, and the
structured failure path."""

import numpy as np
import pytest

from zenolab.corpus import (
    CorpusScenario,
    build_scenario,
    check_suite,
    run_battery,
    scenario_seeds,
)
from zenolab.curves import StaticCurve
from zenolab.measurement import uniform_partition


class TestScenarioSeeds:
    def test_deterministic_and_distinct(self):
        a = scenario_seeds(42, 50)
        b = scenario_seeds(42, 50)
        assert a == b
        assert len(set(a)) == 50

    def test_different_master_seeds_differ(self):
        assert scenario_seeds(1, 10) != scenario_seeds(2, 10)


class TestBuildScenario:
    def test_rebuild_from_seed_is_identical(self):
        seed = scenario_seeds(7, 5)[2]
        a = build_scenario(seed)
        b = build_scenario(seed)
        assert a.describe() == b.describe()
        np.testing.assert_array_equal(a.hamiltonian, b.hamiltonian)
        np.testing.assert_array_equal(a.weights, b.weights)
        np.testing.assert_array_equal(a.partition.times, b.partition.times)

    def test_corpus_covers_all_variants_and_dims(self):
        scenarios = [build_scenario(s) for s in scenario_seeds(42, 60)]
        assert {s.variant for s in scenarios} == {"static", "generated", "sampled"}
        assert {s.partition_kind for s in scenarios} == {"uniform", "random"}
        assert {s.dim for s in scenarios} >= {2, 3, 4, 5, 6, 7, 8} - {5}

    def test_zero_weight_padding_occurs(self):
        scenarios = [build_scenario(s) for s in scenario_seeds(42, 40)]
        assert any(np.min(s.weights) == 0.0 for s in scenarios)


class TestRunBattery:
    def test_small_slice_passes(self):
        for seed in scenario_seeds(3, 5):
            report = run_battery(build_scenario(seed))
            assert report.passed, report.render()
            assert report.checks_run > 5

    def test_broken_scenario_reports_structured_failure(self):
        # Weight vector does not match the basis dimension, so the battery
        # must report a failure instead of raising.
        good = build_scenario(scenario_seeds(3, 1)[0])
        bad = CorpusScenario(
            seed=good.seed,
            dim=2,
            variant="static",
            partition_kind="uniform",
            tau=1.0,
            weights=np.array([0.5, 0.3, 0.2]),
            basis=np.eye(2, dtype=complex),
            hamiltonian=np.eye(2, dtype=complex),
            curve=StaticCurve(np.eye(2, dtype=complex), 1.0),
            partition=uniform_partition(1.0, 2),
        )
        report = run_battery(bad)
        assert not report.passed
        assert report.failures[0][0] == "run_measurement"
        assert "FAIL" in report.render()

    def test_suite_result_render_is_stable(self):
        a = check_suite(5, 6).render()
        b = check_suite(5, 6).render()
        assert a == b
        assert a.endswith("result: PASS\n")
