import json
import subprocess
import sys

import pytest

from hhbv.cli import main, run


def report(argv):
    code, text = run(argv)
    return code, json.loads(text)


def test_hh_dual_numbers_dims():
    code, rep = report(["hh", "dual_numbers", "--builtin", "-P", "6"])
    assert code == 0
    assert rep["result"]["cohomology_dims"] == [2, 1, 1, 1, 1, 1]


def test_hh_field_dims():
    code, rep = report(["hh", "field", "--builtin"])
    assert code == 0
    assert rep["result"]["cohomology_dims"] == [1, 0, 0, 0, 0, 0]


def test_report_embeds_version_config_seed():
    _, rep = report(["hh", "field", "--builtin", "--seed", "17", "-P", "3"])
    assert rep["tool"] == "hhbv" and rep["version"]
    assert rep["seed"] == 17 and rep["config"]["P"] == 3 and rep["config"]["command"] == "hh"


def test_malformed_json_exit_2(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, rep = report(["hh", str(p)])
    assert code == 2 and rep["status"] == "input_error"


def test_missing_file_and_unknown_builtin_exit_2():
    assert run(["hh", "/nonexistent/a.json"])[0] == 2
    assert run(["hh", "nope", "--builtin"])[0] == 2


def test_invariant_violation_exit_3_names_invariant(tmp_path):
    p = tmp_path / "na.json"
    p.write_text(json.dumps({"dim": 2, "basis": ["1", "b"], "unit": ["1", "0"],
                             "mul": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 0, "1"]]}))
    code, rep = report(["hh", str(p)])
    assert code == 3
    assert "associativity" in rep["error"]


def test_small_P_rejected():
    assert run(["hh", "field", "--builtin", "-P", "1"])[0] == 2


def test_hh_with_module_file(tmp_path):
    from hhbv.algebra import builtin_algebra, enveloping_bimodule
    A = builtin_algebra("upper_triangular_2")
    p = tmp_path / "m.json"
    p.write_text(json.dumps(enveloping_bimodule(A).to_json_obj()))
    code, rep = report(["hh", "upper_triangular_2", "--builtin", "--module", str(p), "-P", "3"])
    from hhbv.hochschild.oracle import dense_dims
    assert code == 0
    assert rep["result"]["cohomology_dims"] == dense_dims(A, enveloping_bimodule(A), P=3)[0]


@pytest.mark.parametrize("name", ["product_QxQ", "mat2", "group_algebra_C3", "field"])
def test_verify_passes(name):
    assert run(["verify", name, "--builtin", "-P", "4"])[0] == 0


def test_verify_dual_numbers_fails_on_printed_tt():
    code, rep = report(["verify", "dual_numbers", "--builtin", "-P", "4"])
    assert code == 1
    failed = [c["check"] for c in rep["result"]["axioms"]["checks"] if c["status"] == "fail"]
    assert failed == ["tamarkin_tsygan"]


def test_fuzz_flip_exit_1_with_witness():
    code, rep = report(["verify", "group_algebra_C3", "--builtin", "-P", "3", "--fuzz-flip", "1", "--seed", "4"])
    assert code == 1
    assert len(rep["result"]["mutations"]) == 1
    assert any(c["witness"] for c in rep["result"]["axioms"]["checks"])


def test_cy_product_degree_zero():
    code, rep = report(["cy", "--builtin", "product_QxQ"])
    assert code == 0
    assert rep["result"]["calabi_yau"]["d"] == 0 and rep["result"]["calabi_yau"]["cy"]


def test_cy_upper_triangular_not_vdb():
    code, rep = report(["cy", "--builtin", "upper_triangular_2", "--res", "builtin"])
    assert code == 1
    assert rep["result"]["vdb"]["verdict"] == "not VdB"


def test_cy_group_one():
    code, rep = report(["cy", "--group", "1", "-N", "4"])
    cert = rep["result"]["certificate"]
    assert cert["verdict"] == "CY" and cert["d"] == 1
    assert cert["observed_identities_hold"]
    # the printed BV relation fails, so the command reports a failed check
    assert code == 1 and not cert["printed_identities_hold"]


def test_fundamental_class_and_vdb_commands():
    code, rep = report(["fundamental-class", "upper_triangular_2", "--builtin"])
    assert code == 0 and rep["result"]["fundamental_class"]["cap_is_identity"]
    assert run(["vdb", "mat2", "--builtin"])[0] == 0
    assert run(["vdb", "upper_triangular_2", "--builtin"])[0] == 1


def test_no_finite_resolution_is_input_error():
    assert run(["cy", "dual_numbers", "--builtin"])[0] == 2


def test_twist_demo_command():
    code, rep = report(["vdb", "--group", "1", "--twist", "-1", "-N", "3"])
    assert code == 0
    assert rep["result"]["twist_demo"]["calabi_yau"] == "not CY"
    assert run(["vdb", "--group", "2", "--twist", "-1"])[0] == 2


def test_bv_command_semisimple():
    code, rep = report(["bv", "mat2", "--builtin"])
    assert code == 0 and rep["result"]["bv"]["passed"]


def test_oracle_compare_command():
    code, rep = report(["oracle-compare", "dual_numbers", "--builtin", "-P", "6"])
    assert code == 0 and rep["result"]["agree"]


def test_text_format():
    code, text = run(["hh", "field", "--builtin", "--format", "text", "-P", "3"])
    assert code == 0 and "status:" in text
    with pytest.raises(json.JSONDecodeError):
        json.loads(text)


def test_out_file(tmp_path, capsys):
    p = tmp_path / "r.json"
    assert main(["hh", "field", "--builtin", "--out", str(p), "-P", "3"]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(p.read_text())["status"] == "pass"


DETERMINISM = [
    ["hh", "mat2", "--builtin", "-P", "4"],
    ["verify", "dual_numbers", "--builtin", "-P", "4", "--fuzz-flip", "3", "--seed", "9"],
    ["fundamental-class", "upper_triangular_2", "--builtin"],
    ["vdb", "--group", "1", "--twist", "-1", "-N", "3"],
    ["cy", "--group", "1", "-N", "3"],
    ["bv", "group_algebra_C3", "--builtin"],
    ["oracle-compare", "upper_triangular_2", "--builtin", "-P", "4"],
]


@pytest.mark.parametrize("argv", DETERMINISM, ids=lambda a: a[0])
def test_two_runs_byte_identical(argv, tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"{k}.json"
        subprocess.run([sys.executable, "-m", "hhbv", *argv, "--out", str(p)], check=False)
        outs.append(p.read_bytes())
    assert outs[0] == outs[1] and outs[0]
