"""Command line interface: exit codes and output files."""

import csv
import json

import pytest

from mrplate.cli import main

MODEL_DOC = {
    "materials": [{"id": "slab", "E": 1.0e4, "h": 0.1, "mu": 0.3}],
    "elements": [
        {
            "corners": [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            "rl": {"m": 2, "n": 2},
            "material": "slab",
        }
    ],
    "constraints": [
        {"at": [x, y], "dofs": ["w", "theta_x", "theta_y"]}
        for x in (0.0, 0.5, 1.0)
        for y in (0.0, 0.5, 1.0)
        if x in (0.0, 1.0) or y in (0.0, 1.0)
    ],
    "loads": {"uniform": [{"element": 0, "q": 1.0}]},
}


def model_file(tmp_path, doc=None, name="plate.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc if doc is not None else MODEL_DOC))
    return str(path)


class TestRun:
    def test_skew_stdout(self, capsys):
        assert main(["run", "--case", "skew", "--rl", "5x5"]) == 0
        out = capsys.readouterr().out
        assert "case=skew" in out and "coefficient=" in out

    def test_field_csv(self, tmp_path, capsys):
        out_path = tmp_path / "field.csv"
        args = ["run", "--case", "square-ss", "--rl", "5x5", "--out", str(out_path)]
        assert main(args) == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == "node_id,x,y,w,theta_x,theta_y"
        assert lines[-1].startswith("# coefficient,")
        rows = list(csv.reader(lines[1:-1]))
        assert len(rows) == 25  # 5x5 node grid
        corner = rows[0]
        assert float(corner[3]) == 0.0  # supported corner

    def test_field_csv_deterministic(self, tmp_path, capsys):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            assert main(["run", "--case", "ring", "--out", str(p)]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_json_output(self, tmp_path, capsys):
        out_path = tmp_path / "run.json"
        args = [
            "run", "--case", "skew", "--rl", "5x5",
            "--out", str(out_path), "--format", "json",
        ]
        assert main(args) == 0
        doc = json.loads(out_path.read_text())
        assert doc["case"] == "skew"
        assert doc["dofs"] == 75

    def test_mono_mesh(self, capsys):
        assert main(["run", "--case", "square-ss", "--mono", "--mesh", "4x4"]) == 0
        assert "dofs=75" in capsys.readouterr().out

    def test_usage_errors(self, capsys):
        assert main(["run", "--case", "plate"]) == 1  # unknown case
        assert main(["run", "--case", "skew", "--rl", "banana"]) == 1
        assert main(["run", "--case", "skew", "--rl", "4x4"]) == 1  # even node count
        assert main(["run", "--case", "skew", "--mono"]) == 1  # missing --mesh
        assert main(["run", "--case", "skew", "--rl", "5x5", "--mesh", "4x4"]) == 1
        assert capsys.readouterr().err


class TestConverge:
    def test_rl_sequence_csv(self, tmp_path, capsys):
        out_path = tmp_path / "conv.csv"
        args = [
            "converge", "--case", "square-ss",
            "--rl-list", "3x3,5x5,7x7", "--out", str(out_path),
        ]
        assert main(args) == 0
        rows = list(csv.reader(out_path.read_text().splitlines()))
        assert rows[0] == ["case", "label", "dofs", "free_dofs", "deflection", "coefficient"]
        assert len(rows) == 4
        assert [int(r[2]) for r in rows[1:]] == sorted(int(r[2]) for r in rows[1:])
        assert "wall" not in out_path.read_text()

    def test_json_format(self, capsys):
        args = [
            "converge", "--case", "square-ss", "--rl-list", "3x3,5x5",
            "--out", "-", "--format", "json",
        ]
        assert main(args) == 0
        out = capsys.readouterr().out
        doc = json.loads(out[out.index("[") :])
        assert len(doc) == 2 and doc[0]["dofs"] < doc[1]["dofs"]

    def test_missing_list(self, capsys):
        assert main(["converge", "--case", "skew"]) == 1
        assert main(["converge", "--case", "skew", "--mono"]) == 1
        assert capsys.readouterr().err


class TestModel:
    def test_solve_and_csv(self, tmp_path, capsys):
        out_path = tmp_path / "field.csv"
        path = model_file(tmp_path)
        assert main(["model", path, "--out", str(out_path)]) == 0
        assert "max|w|=" in capsys.readouterr().out
        rows = out_path.read_text().splitlines()
        assert len(rows) == 1 + 9

    def test_missing_file(self, tmp_path, capsys):
        assert main(["model", str(tmp_path / "nope.json")]) == 1
        assert capsys.readouterr().err

    def test_schema_error(self, tmp_path, capsys):
        bad = dict(MODEL_DOC, extra=1)
        assert main(["model", model_file(tmp_path, bad, "bad.json")]) == 1
        assert "unknown key" in capsys.readouterr().err

    def test_numeric_failure(self, tmp_path, capsys):
        floating = {k: v for k, v in MODEL_DOC.items() if k != "constraints"}
        assert main(["model", model_file(tmp_path, floating, "free.json")]) == 2
        assert "numerical failure" in capsys.readouterr().err
