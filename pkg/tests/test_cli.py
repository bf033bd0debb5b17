from __future__ import annotations

import json

import pytest

from polystatics.cli import cli_main

from conftest import (pentagon_document, pentagon_prism_document,
                      tetra_document, unit_cube_document)


@pytest.fixture
def model_path(tmp_path):
    path = tmp_path / "pentagon.json"
    path.write_text(json.dumps(pentagon_document()))
    return str(path)


@pytest.fixture
def prism_path(tmp_path):
    path = tmp_path / "prism.json"
    path.write_text(json.dumps(pentagon_prism_document()))
    return str(path)


def test_check_command(model_path, capsys):
    assert cli_main(["check", model_path]) == 0
    out = capsys.readouterr().out
    assert "faces: 1" in out and "ok" in out


def test_area_command(model_path, capsys):
    assert cli_main(["area", model_path, "--face", "0"]) == 0
    out = capsys.readouterr().out
    assert "signed area: 464.03" in out
    assert "area matrix" in out


def test_area_trace_flag(model_path, capsys):
    assert cli_main(["area", model_path, "--face", "0", "--trace"]) == 0
    assert "average heights" in capsys.readouterr().out


def test_gdof_command_matches_worked_example(model_path, capsys):
    assert cli_main(["gdof", model_path, "--face", "0",
                     "--fix", "4=41.78"]) == 0
    out = capsys.readouterr().out
    assert "CGDoF: 2" in out
    assert "ci edge:  3" in out
    assert "nci edges: [2]" in out
    assert "nfd edges: [0, 1]" in out


def test_gdof_contradiction_exits_one(tmp_path, capsys):
    path = tmp_path / "cube.json"
    path.write_text(json.dumps(unit_cube_document()))
    # find a z-normal face and fix two opposite edges inconsistently
    from polystatics import load_complex
    cube = load_complex(unit_cube_document())
    fi = next(i for i, f in enumerate(cube.faces)
              if abs(abs(f.normal[2]) - 1.0) < 1e-12)
    loop = cube.faces[fi].edge_loop
    code = cli_main(["gdof", str(path), "--face", str(fi),
                     "--fix", f"{loop[0][0]}=1", "--fix", f"{loop[2][0]}=2"])
    assert code == 1
    assert "CGDoF: -inf" in capsys.readouterr().out


def test_solve_face_command(model_path, capsys):
    assert cli_main(["solve-face", model_path, "--face", "0",
                     "--target-area", "0", "--fix", "4=41.78",
                     "--root", "near"]) == 0
    out = capsys.readouterr().out
    assert "roots:" in out and "chosen root:" in out
    assert "achieved area:" in out


def test_solve_face_no_solution_exits_one(tmp_path, capsys):
    path = tmp_path / "tetra.json"
    path.write_text(json.dumps(tetra_document()))
    code = cli_main(["solve-face", str(path), "--face", "0",
                     "--target-area", "-0.5"])
    assert code == 1
    err = capsys.readouterr().err
    assert "constraint failure" in err and "a=" in err and "b=" in err


def test_solve_pipeline_writes_outputs(prism_path, tmp_path, capsys):
    constraints = tmp_path / "constraints.json"
    constraints.write_text(json.dumps({
        "fixed_edges": {"9": 41.78},
        "face_targets": [{"face": 1, "area": 0.0, "root": "near"}],
    }))
    out_dir = tmp_path / "out"
    assert cli_main(["solve", prism_path, str(constraints),
                     "-o", str(out_dir)]) == 0
    primal = json.loads((out_dir / "primal.json").read_text())
    dual = json.loads((out_dir / "dual.json").read_text())
    log = json.loads((out_dir / "step_log.json").read_text())
    assert len(primal["vertices"]) == 10
    assert dual["members"][1]["sign"] == "0"
    assert len(log["steps"]) == 1
    assert abs(log["steps"][0]["achieved_area"]) < 1e-6


def test_dual_command(tmp_path, capsys):
    path = tmp_path / "cube.json"
    path.write_text(json.dumps(unit_cube_document()))
    assert cli_main(["dual", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["members"]) == 6


def test_export_round_trip_is_bit_exact(prism_path, tmp_path):
    from polystatics import load_complex, load_document

    complex_ = load_complex(load_document(prism_path))
    exported = tmp_path / "again.json"
    exported.write_text(json.dumps(complex_.to_document()))
    again = load_complex(load_document(str(exported)))
    assert (again.vertices == complex_.vertices).all()
    assert again.to_document() == complex_.to_document()


def test_malformed_json_exits_two(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert cli_main(["check", str(path)]) == 2
    assert "invalid JSON" in capsys.readouterr().err


def test_bad_fix_argument_exits_two(model_path, capsys):
    assert cli_main(["gdof", model_path, "--face", "0",
                     "--fix", "nonsense"]) == 2


def test_unknown_flag_exits_two(model_path):
    with pytest.raises(SystemExit) as err:
        cli_main(["check", model_path, "--frobnicate"])
    assert err.value.code == 2
