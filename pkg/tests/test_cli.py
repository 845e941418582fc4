from __future__ import annotations

import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import pytest

from tensor_ideals.cli import run_command
from tensor_ideals.fileio import PRESET_NAMES, load_preset, parse_presentation, presentation_to_dict

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = run_command([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def json_of(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json", "-")
    return code, json.loads(out)


def test_spectrum_of_proj_field(capsys):
    code, doc = json_of(capsys, "spectrum", "presets/proj_field.json")
    assert code == 0
    assert len(doc["spectrum"]["points"]) == 1


def test_classify_mod_kc2(capsys):
    code, doc = json_of(capsys, "classify", "presets/mod_kC2.json")
    assert code == 0
    assert len(doc["ideals"]) == len(doc["bijection"]) == 3
    assert all(doc["checks"].values())


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_classify_matches_expected_fixture(capsys, name):
    code, doc = json_of(capsys, "classify", name)
    assert code == 0
    expected = json.loads(resources.files("tensor_ideals").joinpath("presets", "expected", f"{name}.json").read_text())
    assert doc == expected


@pytest.mark.parametrize(
    "argv, code",
    [
        (["validate", DATA / "broken.json"], 2),
        (["spectrum", DATA / "broken.json"], 2),
        (["frobnicate"], 2),
        ([], 2),
        (["validate", DATA / "no_such_file.json"], 2),
        (["mf", "validate", DATA / "mf_bad.json"], 1),
        (["mf", "validate", DATA / "mf_x.json"], 0),
        (["birkhoff", DATA / "m3.json"], 2),
        (["birkhoff", DATA / "chain3.json"], 0),
        (["hochster", DATA / "indiscrete.json"], 2),
        (["hochster", DATA / "sierpinski.json"], 0),
        (["hochster", "--from-spectrum", "mod_kC2"], 0),
        (["hochster"], 2),
        (["stabilize", "mod_kC2", "--ideal", "kC2"], 0),
        (["stabilize", "mod_kC2", "--ideal", "k"], 2),
        (["mf", "tensor", DATA / "mf_x.json", DATA / "mf_jordan.json"], 2),
        (["mf", "absorb", DATA / "mf_x.json"], 2),
        (["splice", "demo", DATA / "chains.json"], 0),
        (["classify", "--random", "5", "--seed", "3"], 0),
        (["classify"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_schema_errors_name_the_problem(capsys):
    code, _, err = run(capsys, "validate", DATA / "broken.json")
    assert code == 2 and "ghost" in err
    code, _, err = run(capsys, "frobnicate")
    assert "usage" in err


def test_check_failure_reports_entry(capsys):
    code, doc = json_of(capsys, "mf", "validate", DATA / "mf_bad.json")
    assert code == 1
    assert doc["checks"] == {"phi_psi": False, "psi_phi": False}
    assert doc["failures"]["phi_psi"]


def test_json_to_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "spectrum", "mod_kC2", "--json", target)
    assert code == 0 and "2 prime(s)" in out
    assert len(json.loads(target.read_text())["spectrum"]["points"]) == 2


def test_global_flags_before_the_command(capsys):
    code, out, _ = run(capsys, "--json", "-", "--cap", "10", "ideals", "proj_k_x_k")
    assert code == 0 and len(json.loads(out)["ideals"]) == 4


def test_cap_flag_limits_enumeration(capsys):
    assert run(capsys, "ideals", "proj_field_x5", "--cap", "3")[0] == 2
    assert run(capsys, "ideals", "proj_field_x5", "--cap", "5")[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "cc_split"],
        ["ideals", "mod_kC2"],
        ["stabilize", "mod_kC2", "--ideal", "kC2"],
        ["hochster", "--from-spectrum", "proj_k_x_k"],
        ["mf", "tensor", DATA / "mf_x.json", DATA / "mf_y.json"],
        ["classify", "--random", "3", "--seed", "11"],
    ],
)
def test_json_is_byte_identical(capsys, argv):
    first = run(capsys, *argv, "--json", "-")[1]
    second = run(capsys, *argv, "--json", "-")[1]
    assert first == second and first.endswith("\n")


def dot_lines(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--dot", "-")
    assert code == 0
    again = run(capsys, *argv, "--dot", "-")[1]
    assert out == again
    nodes = [line for line in out.splitlines() if "[label=" in line]
    edges = [line for line in out.splitlines() if "->" in line]
    return nodes, edges


def test_dot_discrete_spectrum(capsys):
    nodes, edges = dot_lines(capsys, "spectrum", "proj_k_x_k")
    assert len(nodes) == 2 and not edges


def test_dot_sierpinski(capsys):
    nodes, edges = dot_lines(capsys, "spectrum", "mod_kC2")
    assert len(nodes) == 2 and len(edges) == 1
    nodes, edges = dot_lines(capsys, "hochster", DATA / "sierpinski.json")
    assert len(nodes) == 2 and len(edges) == 1


def test_dot_boolean_square(capsys):
    nodes, edges = dot_lines(capsys, "ideals", "proj_k_x_k")
    assert len(nodes) == 4 and len(edges) == 4
    assert '[label="{S,T}"]' in "".join(nodes)


def test_dot_to_file(capsys, tmp_path):
    target = tmp_path / "spc.dot"
    code, out, _ = run(capsys, "spectrum", "mod_kC2", "--dot", target)
    assert code == 0 and out
    assert target.read_text().startswith('digraph "mod_kC2" {')


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_presets_round_trip(name):
    p = load_preset(name)
    doc = presentation_to_dict(p)
    again = parse_presentation(json.loads(json.dumps(doc)), name)
    assert presentation_to_dict(again) == doc
    assert again.labels == p.labels


def test_mf_tensor_output(capsys):
    code, doc = json_of(capsys, "mf", "tensor", DATA / "mf_x.json", DATA / "mf_y.json")
    assert code == 0
    assert doc["tensor"]["phi"] == [["x", "y"], ["-y", "x"]]
    assert doc["tensor"]["psi"] == [["x", "-y"], ["y", "x"]]


def test_mf_absorb_output(capsys):
    code, doc = json_of(capsys, "mf", "absorb", DATA / "mf_x.json", "--g", "y^2")
    assert code == 0
    assert doc["alpha"] == [["x", "1"], ["1", "0"]]
    code, doc = json_of(capsys, "mf", "absorb", DATA / "mf_x.json", "--g", "y^2", "--degree", "0")
    assert code == 1 and doc["checks"]["isomorphism_found"] is False


def test_splice_demo_output(capsys):
    code, doc = json_of(capsys, "splice", "demo", DATA / "chains.json")
    assert code == 0
    assert doc["spliced"]["vertices"] == ["X", "W", "V", "Z"]
    assert doc["spliced"]["words"][1] == ["b", "c"]
    assert doc["spliced"]["sign"] == -1
    assert doc["koszul_pullback"]["sign"] == 1


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tensor_ideals.cli", "spectrum", "proj_field", "--json", "-"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["spectrum"]["points"]) == 1
