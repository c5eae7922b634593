"""Scenario-file loading and validation tests."""

import json

import numpy as np
import pytest

from zenolab.curves import GeneratedCurve, SampledCurve, StaticCurve
from zenolab.errors import SchemaError
from zenolab.scenario import load_scenario


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def minimal_zeno(tmp_path, **overrides):
    payload = {
        "dim": 2,
        "hamiltonian": "pauli_z",
        "state": {"eigenvalues": [0.7, 0.3], "basis": "standard"},
        "curve": {"static": {}},
        "tau": 1.0,
        "partitions": {"uniform": [1, 4]},
    }
    payload.update(overrides)
    return write_json(tmp_path / "scenario.json", payload)


class TestLoadScenario:
    def test_minimal_zeno_file_loads(self, tmp_path):
        scenario = load_scenario(minimal_zeno(tmp_path))
        assert scenario.dim == 2
        assert scenario.tau == 1.0
        assert isinstance(scenario.curve(), StaticCurve)
        assert [p.n for p in scenario.partitions()] == [1, 4]
        np.testing.assert_allclose(scenario.state().matrix, np.diag([0.7, 0.3]), atol=1e-12)

    def test_underscore_keys_ignored(self, tmp_path):
        path = minimal_zeno(tmp_path, _comment="ignored", _note=["also", "ignored"])
        assert load_scenario(path).dim == 2

    def test_bad_eigenvalue_sum_names_field(self, tmp_path):
        path = minimal_zeno(tmp_path, state={"eigenvalues": [0.6, 0.3]})
        with pytest.raises(SchemaError, match="eigenvalues sum to"):
            load_scenario(path)

    def test_every_problem_reported_at_once(self, tmp_path):
        path = write_json(
            tmp_path / "broken.json",
            {
                "dim": -3,
                "hamiltonian": "pauli_z",
                "state": {"eigenvalues": [0.5, 0.4]},
                "curve": {"static": {}},
                "tau": -1.0,
                "partitions": {"uniform": [2]},
            },
        )
        with pytest.raises(SchemaError) as excinfo:
            load_scenario(path)
        message = str(excinfo.value)
        assert "dim" in message and "tau" in message and "eigenvalues" in message

    def test_missing_file_is_schema_error(self, tmp_path):
        with pytest.raises(SchemaError, match="cannot read"):
            load_scenario(str(tmp_path / "absent.json"))

    def test_invalid_json_is_schema_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(SchemaError, match="not valid JSON"):
            load_scenario(str(bad))

    def test_dimension_mismatch_between_specs(self, tmp_path):
        path = minimal_zeno(tmp_path, dim=3, state={"eigenvalues": [0.5, 0.3, 0.2]})
        with pytest.raises(SchemaError, match="dimension 2"):
            load_scenario(path)

    def test_random_partition_plan(self, tmp_path):
        path = minimal_zeno(tmp_path, partitions={"random": {"n": [1, 7], "seed": 3}})
        parts = load_scenario(path).partitions()
        assert [p.n for p in parts] == [1, 7]
        again = load_scenario(path).partitions()
        np.testing.assert_array_equal(parts[1].times, again[1].times)


class TestOperatorSpecs:
    def test_named_pauli_requires_dim_two(self, tmp_path):
        path = minimal_zeno(tmp_path, dim=3, hamiltonian="pauli_x",
                            state={"eigenvalues": [0.5, 0.3, 0.2]})
        with pytest.raises(SchemaError, match="requires dimension 2"):
            load_scenario(path)

    def test_diagonal_and_dense_literals(self, tmp_path):
        dense = [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]
        path = minimal_zeno(tmp_path, hamiltonian={"dense": dense})
        h = load_scenario(path).hamiltonian()
        np.testing.assert_allclose(h, np.array([[0, 1], [1, 0]]), atol=1e-14)
        path = minimal_zeno(tmp_path, hamiltonian={"diagonal": [0.5, 1.5]})
        np.testing.assert_allclose(load_scenario(path).hamiltonian(), np.diag([0.5, 1.5]), atol=1e-14)

    def test_seeded_random_with_norm(self, tmp_path):
        path = minimal_zeno(tmp_path, hamiltonian={"random": {"seed": 7, "norm": 1.0}})
        h = load_scenario(path).hamiltonian()
        assert np.max(np.abs(np.linalg.eigvalsh(h))) == pytest.approx(1.0, abs=1e-12)

    def test_generated_curve_spec(self, tmp_path):
        path = minimal_zeno(tmp_path, curve={"generated": {"generator": "pauli_y"}})
        assert isinstance(load_scenario(path).curve(), GeneratedCurve)


class TestSampledCurveSpecs:
    def frames_payload(self, rotate=True):
        import math

        times = [0.0, 0.5, 1.0]
        frames = []
        for t in times:
            c, s = (math.cos(t), math.sin(t)) if rotate else (1.0, 0.0)
            frames.append([[[c, 0.0], [-s, 0.0]], [[s, 0.0], [c, 0.0]]])
        return {"times": times, "frames": frames}

    def test_sampled_curve_loads_with_curve_basis(self, tmp_path):
        write_json(tmp_path / "frames.json", self.frames_payload())
        path = minimal_zeno(
            tmp_path,
            curve={"sampled": {"file": "frames.json"}},
            state={"eigenvalues": [0.7, 0.3], "basis": "curve"},
            partitions={"uniform": [2]},
        )
        scenario = load_scenario(path)
        assert isinstance(scenario.curve(), SampledCurve)
        scenario.state()

    def test_non_orthonormal_frame_rejected(self, tmp_path):
        payload = self.frames_payload()
        payload["frames"][1] = [[[1.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
        write_json(tmp_path / "frames.json", payload)
        path = minimal_zeno(
            tmp_path,
            curve={"sampled": {"file": "frames.json"}},
            state={"eigenvalues": [0.7, 0.3], "basis": "curve"},
            partitions={"uniform": [2]},
        )
        with pytest.raises(SchemaError, match="orthonormal"):
            load_scenario(path)

    def test_partition_off_grid_rejected(self, tmp_path):
        write_json(tmp_path / "frames.json", self.frames_payload())
        path = minimal_zeno(
            tmp_path,
            curve={"sampled": {"file": "frames.json"}},
            state={"eigenvalues": [0.7, 0.3], "basis": "curve"},
            partitions={"uniform": [3]},
        )
        with pytest.raises(SchemaError, match="grid"):
            load_scenario(path)

    def test_mismatched_state_basis_rejected(self, tmp_path):
        write_json(tmp_path / "frames.json", self.frames_payload())
        path = minimal_zeno(
            tmp_path,
            curve={"sampled": {"file": "frames.json"}},
            state={"eigenvalues": [0.7, 0.3], "basis": "standard"},
            partitions={"uniform": [2]},
        )
        # frames start at the identity here, so "standard" happens to match
        load_scenario(path)
        payload = self.frames_payload()
        payload["frames"][0] = [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]
        payload["times"] = [0.0, 0.5, 1.0]
        write_json(tmp_path / "frames.json", payload)
        with pytest.raises(SchemaError, match="first frame"):
            load_scenario(path)


class TestShippedExamples:
    @pytest.mark.parametrize(
        "name",
        ["qubit_static.json", "unitary_approx.json", "zeno_diagonal.json", "sampled_rotation.json"],
    )
    def test_example_scenarios_load(self, name):
        import os

        here = os.path.join(os.path.dirname(__file__), "..", "scenarios", name)
        scenario = load_scenario(here)
        assert scenario.dim >= 2
