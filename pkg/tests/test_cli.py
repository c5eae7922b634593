"""Command-line interface tests: subcommands, exit codes, determinism."""

import json
import os

import pytest

from zenolab.cli import main

SCENARIOS = os.path.join(os.path.dirname(__file__), "..", "scenarios")


def qubit_scenario_file(tmp_path, **overrides):
    payload = {
        "dim": 2,
        "hamiltonian": "pauli_x",
        "state": {"eigenvalues": [0.7, 0.3], "basis": "standard"},
        "curve": {"static": {}},
        "tau": 1.0,
        "partitions": {"uniform": [2, 4, 8, 16]},
    }
    payload.update(overrides)
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(payload))
    return str(path)


class TestRunCommand:
    def test_prints_one_line_per_record(self, tmp_path, capsys):
        rc = main(["run", qubit_scenario_file(tmp_path)])
        out = capsys.readouterr().out
        assert rc == 0
        assert len([l for l in out.splitlines() if l.strip() and not l.startswith("N ")]) >= 4

    def test_writes_csv_when_scenario_has_output(self, tmp_path, capsys):
        out_csv = str(tmp_path / "records.csv")
        rc = main(["run", qubit_scenario_file(tmp_path, output=out_csv)])
        assert rc == 0
        assert os.path.exists(out_csv)

    def test_missing_scenario_is_config_error(self, tmp_path, capsys):
        rc = main(["run", str(tmp_path / "none.json")])
        assert rc == 2
        assert "configuration error" in capsys.readouterr().err

    def test_schema_violation_is_config_error(self, tmp_path, capsys):
        path = qubit_scenario_file(tmp_path, state={"eigenvalues": [0.6, 0.3]})
        rc = main(["run", path])
        assert rc == 2
        assert "eigenvalues" in capsys.readouterr().err


class TestSweepCommand:
    def test_requires_some_output_path(self, tmp_path, capsys):
        rc = main(["sweep", qubit_scenario_file(tmp_path)])
        assert rc == 2

    def test_writes_csv(self, tmp_path, capsys):
        out_csv = str(tmp_path / "sweep.csv")
        rc = main(["sweep", qubit_scenario_file(tmp_path), "--output", out_csv])
        assert rc == 0
        assert open(out_csv).readline().startswith("#schema=1")


class TestRateCommand:
    def test_fits_slope_from_csv(self, tmp_path, capsys):
        out_csv = str(tmp_path / "sweep.csv")
        main(["sweep", qubit_scenario_file(tmp_path, partitions={"uniform": [2, 4, 8, 16, 32, 64]}),
              "--output", out_csv])
        capsys.readouterr()
        rc = main(["rate", out_csv, "--column", "trace_distance"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "slope=" in out

    def test_nonpositive_column_is_config_error(self, tmp_path, capsys):
        out_csv = str(tmp_path / "sweep.csv")
        main(["sweep", qubit_scenario_file(tmp_path), "--output", out_csv])
        capsys.readouterr()
        rc = main(["rate", out_csv, "--column", "a3_1"])
        assert rc == 2
        assert "positive" in capsys.readouterr().err


class TestPlotScriptCommand:
    def test_emits_gnuplot_script(self, tmp_path, capsys):
        out_csv = str(tmp_path / "sweep.csv")
        main(["sweep", qubit_scenario_file(tmp_path), "--output", out_csv])
        capsys.readouterr()
        rc = main(["plot-script", out_csv, "--column", "trace_distance"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "set logscale xy" in out
        assert "using 1:4" in out

    def test_unknown_column_is_config_error(self, tmp_path, capsys):
        out_csv = str(tmp_path / "sweep.csv")
        main(["sweep", qubit_scenario_file(tmp_path), "--output", out_csv])
        capsys.readouterr()
        rc = main(["plot-script", out_csv, "--column", "bogus"])
        assert rc == 2


class TestCheckCommand:
    def test_small_corpus_passes(self, capsys):
        rc = main(["check", "--seed", "7", "--size", "10"])
        out = capsys.readouterr().out
        assert rc == 0
        assert out.startswith("check seed=7 size=10")
        assert out.rstrip().endswith("result: PASS")

    def test_byte_identical_reports(self, capsys):
        rc1 = main(["check", "--seed", "11", "--size", "12"])
        first = capsys.readouterr().out
        rc2 = main(["check", "--seed", "11", "--size", "12"])
        second = capsys.readouterr().out
        assert rc1 == rc2 == 0
        assert first == second

    def test_replay_single_scenario(self, capsys):
        from zenolab.corpus import scenario_seeds

        seed = scenario_seeds(7, 10)[3]
        rc = main(["check", "--replay", str(seed)])
        out = capsys.readouterr().out
        assert rc == 0
        assert f"seed={seed}" in out

    def test_battery_failure_exits_one(self, capsys, monkeypatch):
        import zenolab.cli as cli_mod
        from zenolab.corpus import ScenarioReport, SuiteResult, build_scenario, scenario_seeds

        scenario = build_scenario(scenario_seeds(7, 1)[0])
        failing = ScenarioReport(scenario=scenario, checks_run=1, failures=(("fake_check", "lhs > rhs"),))

        def fake_suite(master_seed, size):
            return SuiteResult(master_seed=master_seed, reports=(failing,))

        monkeypatch.setattr(cli_mod, "check_suite", fake_suite)
        rc = main(["check", "--seed", "7", "--size", "1"])
        out = capsys.readouterr().out
        assert rc == 1
        assert "FAIL" in out and "fake_check" in out


class TestShippedScenarios:
    def test_zeno_example_runs_clean(self, capsys):
        rc = main(["run", os.path.join(SCENARIOS, "zeno_diagonal.json")])
        assert rc == 0

    def test_sampled_example_runs_clean(self, capsys):
        rc = main(["run", os.path.join(SCENARIOS, "sampled_rotation.json")])
        assert rc == 0
