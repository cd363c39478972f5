import json
import subprocess
import sys

import pytest

from samod.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_submodules(capsys):
    code, out, _ = run(capsys, "submodules", "--module", "B2", "--json")
    assert code == 0 and json.loads(out)["count"] == 7


def test_sa_listing_and_membership(capsys):
    code, out, _ = run(capsys, "sa", "--module", "C3", "--json")
    assert json.loads(out)["count"] == 3
    code, out, _ = run(capsys, "sa", "--module", "C3", "--D", "{0,2}", "--json")
    assert json.loads(out)["sa"] is False


def test_hull(capsys):
    _, out, _ = run(capsys, "hull", "--module", "NSAT4", "--D", "{0,3}", "--json")
    assert json.loads(out)["subtractive_hull"] == "{0,1,2,3}"


def test_am_certificate(capsys):
    code, out, _ = run(capsys, "am", "--module", "C3", "--factors", "{0,1};{0,2}", "--json")
    data = json.loads(out)
    assert code == 0 and data["am"] is False and data["certificate"] == ["(0,2)", "(1,2)"]


def test_closure_dump_classes(capsys):
    _, out, _ = run(capsys, "closure", "--module", "C4", "--factors", "{0,1,3};{0,1}", "--dump-classes", "--json")
    assert sorted(map(sorted, json.loads(out)["partition"])) == [
        ["(0,0)"], ["(0,1)", "(1,0)", "(1,1)"], ["(3,0)", "(3,1)"]]


def test_ext(capsys):
    _, out, _ = run(capsys, "ext", "--module", "C4", "--A", "{0,1,3}", "--D", "{0,1}", "--T", "{0,1}", "--json")
    data = json.loads(out)
    assert data["is_sa_extension"] and data["is_complementary"] and data["is_saturated"]
    assert data["am"] == {"ok": True, "classes": 3}


def test_complement(capsys):
    _, out, _ = run(capsys, "complement", "--module", "B2", "--W", "{00,01}", "--D", "{00}", "--json")
    assert json.loads(out)["complements"] == ["{00,10}"]


def test_order(capsys):
    _, out, _ = run(capsys, "order", "--module", "C4", "--D", "{0,1}", "--A", "{0,1,3}", "--json")
    data = json.loads(out)
    assert data["fix"] == "{1,3}" and data["d_max"] == "1"


def test_retraction_default(capsys):
    code, out, _ = run(capsys, "retraction", "--json")
    data = json.loads(out)
    assert code == 0 and data["size"] == 5 and data["ok"]


def test_action(capsys):
    _, out, _ = run(capsys, "action", "--module", "C3", "--json")
    assert json.loads(out)["c_alpha"] == {"0": "{0}", "1": "{0,1}", "2": "{0,1,2}"}


def test_hierarchy(capsys):
    code, out, _ = run(capsys, "hierarchy", "--module", "C3", "--factors", "{0,1};{0,2}", "--S", "{1};{2}", "--json")
    assert code == 0 and json.loads(out)["amalgam_size"] == 4


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", "--module", "SUPERTROP(2)")
    assert code == 0 and "all module laws hold" in out


def test_fuzz(capsys):
    code, out, _ = run(capsys, "fuzz", "--seed", "1", "--budget", "3", "--json")
    assert code == 0 and json.loads(out)["mismatches"] == []


def test_suite_outputs(capsys, tmp_path):
    out_json, out_csv, out_png = tmp_path / "r.json", tmp_path / "r.csv", tmp_path / "r.png"
    code, _, _ = run(capsys, "suite", "--seed", "1", "--budget", "2", "--suite", "T6.5,P1.3",
                     "--out", str(out_json), "--csv", str(out_csv), "--figures", str(out_png))
    assert code == 0
    assert json.loads(out_json.read_text())["schema_version"] == 1
    assert out_csv.read_text().startswith("theorem,pass")
    assert out_png.stat().st_size > 0


def test_suite_violation_exit_code(capsys):
    code, out, _ = run(capsys, "suite", "--seed", "42", "--budget", "3", "--suite", "P6.4")
    assert code == 1 and json.loads(out)["violations"]


@pytest.mark.parametrize("argv", [["hull", "--module", "C3"], ["hull", "--module", "C3", "--D", "{9}"],
                                  ["hull", "--module", "NOPE(1)", "--D", "{0}"], ["bogus"],
                                  ["suite", "--suite", "X1.1"], ["suite", "--budget", "-1"],
                                  ["am", "--module", "NSAT4", "--factors", "{0,1}"]])
def test_usage_errors_exit_two(capsys, argv):
    assert main(argv) == 2


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "samod.cli", "submodules", "--module", "C3"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("4 submodules")
