import csv
import io
import json

import numpy as np
import pytest

from szegojac.cli import main


def write_doc(tmp_path, doc, name="in.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestCheckCommand:
    def test_coefficient_direction_exits_zero(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"alpha": [0.0] * 6})
        code, out, _ = run(capsys, ["check", "--direction", "2to1",
                                    "--variant", "o", "--input", path])
        assert code == 0
        rep = json.loads(out)
        assert rep["status"] == "pass"

    def test_matrix_direction_exits_zero(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"a": [], "b": []})
        code, out, _ = run(capsys, ["check", "--direction", "1to2",
                                    "--input", path])
        assert code == 0
        rep = json.loads(out)
        assert rep["case"] == 2
        assert rep["variant"] == "o"

    def test_uncertifiable_edge_exits_two(self, tmp_path, capsys):
        # an edge tolerance below what extrapolation can certify makes
        # the classification ambiguous, which is reported rather than
        # silently resolved
        path = write_doc(tmp_path, {"a": [], "b": []})
        code, out, _ = run(capsys, ["check", "--direction", "1to2",
                                    "--input", path,
                                    "--tol-edge", "1e-18"])
        assert code == 2
        assert json.loads(out)["status"] == "inconclusive"

    def test_variant_can_come_from_the_document(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"alpha": [0.0] * 4, "variant": "e"})
        code, out, _ = run(capsys, ["check", "--direction", "2to1",
                                    "--input", path])
        assert code == 0
        assert json.loads(out)["variant"] == "e"


class TestErrorPaths:
    def test_missing_input_file(self, capsys):
        code, out, err = run(capsys, ["check", "--direction", "2to1",
                                      "--variant", "o", "--input",
                                      "/nonexistent/doc.json"])
        assert code == 1
        assert out == ""
        assert err.startswith("error:")

    def test_band_energy_reports_and_fails(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"a": [], "b": []})
        code, _, err = run(capsys, ["m-function", "--at", "0.5",
                                    "--input", path])
        assert code == 1
        assert err.startswith("error:")

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _, err = run(capsys, ["eigs", "--input", str(path)])
        assert code == 1
        assert err.startswith("error:")


class TestGeronimusCommand:
    def test_forward_csv_table(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"alpha": [0.0] * 6})
        code, out, _ = run(capsys, ["geronimus", "--direction", "fwd",
                                    "--variant", "e", "--input", path,
                                    "--csv"])
        assert code == 0
        rows = parse_csv(out)
        assert rows[0]["n"] == "1"
        assert abs(float(rows[0]["a"]) - np.sqrt(2.0)) < 1e-12
        assert float(rows[0]["b"]) == 0.0

    def test_inverse_from_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin",
                            io.StringIO(json.dumps({"a": [], "b": []})))
        code, out, _ = run(capsys, ["geronimus", "--direction", "inv",
                                    "--variant", "o"])
        assert code == 0
        doc = json.loads(out)
        assert doc["alpha_minus1"] == -1.0
        assert max(abs(a) for a in doc["alpha"]) < 1e-9

    def test_output_file(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"alpha": [0.1, 0.2]})
        dest = tmp_path / "out.json"
        code, out, _ = run(capsys, ["geronimus", "--direction", "fwd",
                                    "--variant", "o", "--input", path,
                                    "--output", str(dest)])
        assert code == 0
        assert out == ""
        doc = json.loads(dest.read_text())
        assert doc["matrix"]["a"]


class TestSzegoMapCommand:
    def test_forward_csv_table(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"alpha": [0.0] * 4})
        code, out, _ = run(capsys, ["szego-map", "--direction", "fwd",
                                    "--variant", "o", "--input", path,
                                    "--csv", "--grid-size", "512"])
        assert code == 0
        rows = parse_csv(out)
        assert len(rows) == 256
        assert set(rows[0]) == {"x", "v"}
        assert all(float(r["v"]) > 0.0 for r in rows)


class TestCommuteCommand:
    def test_add_emits_new_matrix(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"a": [], "b": []})
        code, out, _ = run(capsys, ["commute", "add", "--E", "3",
                                    "--gamma", "1", "--input", path])
        assert code == 0
        doc = json.loads(out)
        assert doc["weight"] == 0.5
        assert doc["matrix"]["b"][0] != 0.0

    def test_add_without_gamma_fails(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"a": [], "b": []})
        code, _, err = run(capsys, ["commute", "add", "--E", "3",
                                    "--input", path])
        assert code == 1
        assert "gamma" in err


class TestAsymptoticsCommand:
    def test_default_output_is_csv(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"a": [], "b": []})
        code, out, _ = run(capsys, ["asymptotics", "--E", "2.5",
                                    "--K", "16", "--input", path])
        assert code == 0
        rows = parse_csv(out)
        assert set(rows[0]) == {"k", "psi_s", "psi_b", "ratio",
                                "residual"}
        assert float(rows[1]["psi_s"]) == 0.5
        assert float(rows[1]["psi_b"]) == 2.0

    def test_json_flag(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"a": [], "b": []})
        code, out, _ = run(capsys, ["asymptotics", "--E", "2", "--K",
                                    "16", "--input", path, "--json"])
        assert code == 0
        doc = json.loads(out)
        assert doc["psi_b"][:3] == [0.0, 1.0, 2.0]
        assert len(doc["kinds"]) == 2


class TestPointwiseCommands:
    def test_m_function_complex_point(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"a": [], "b": []})
        code, out, _ = run(capsys, ["m-function", "--at", "0,1",
                                    "--input", path])
        assert code == 0
        doc = json.loads(out)
        assert abs(doc["m_im"] - (np.sqrt(5.0) - 1.0) / 2.0) < 1e-12

    def test_edges_tail_method(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"a": [], "b": []})
        code, out, _ = run(capsys, ["edges", "--method",
                                    "closed-form-tail", "--input",
                                    path])
        assert code == 0
        doc = json.loads(out)
        assert doc["plus"]["status"] == "finite"
        assert abs(doc["plus"]["value"] + 1.0) < 1e-9

    def test_eigs_csv(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"a": [], "b": [3.0]})
        code, out, _ = run(capsys, ["eigs", "--input", path, "--csv"])
        assert code == 0
        rows = parse_csv(out)
        assert len(rows) == 1
        assert abs(float(rows[0]["E"]) - 10.0 / 3.0) < 1e-9
