import json
import subprocess
import sys

import pytest

from qkm.cli import main
from qkm.cartan import Weight, new_cartan_datum

from oracles import contravariant_rank

HYPERBOLIC = "[[2,-3],[-3,2]]"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_rmatrix_top_block(capsys):
    code, out, _ = run(capsys, "rmatrix", "--cartan", "A1", "--lambda", "1", "--mu", "1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["blocks"][0]["matrix"] == [["q^{1/2}"]]
    assert sum(len(b["matrix"]) for b in data["blocks"]) == 4
    assert data["provenance"] == "half-twist"


def test_rmatrix_oracle_same_matrices(capsys):
    _, a, _ = run(capsys, "rmatrix", "--cartan", "A2", "--lambda", "1,0", "--mu", "0,1")
    _, b, _ = run(capsys, "rmatrix", "--cartan", "A2", "--lambda", "1,0", "--mu", "0,1", "--oracle")
    da, db = json.loads(a), json.loads(b)
    assert db["provenance"] == "oracle"
    assert [x["matrix"] for x in da["blocks"]] == [x["matrix"] for x in db["blocks"]]


def test_singulars_one_column(capsys):
    code, out, _ = run(capsys, "singulars", "--cartan", "A1", "--lambda", "1", "--mu", "1", "--weight", "0")
    assert code == 0
    data = json.loads(out)["singular"]
    assert len(data) == 1 and data[0]["columns"] == [["-q^{-1}", "1"]]


def test_build_rep_hyperbolic_table(capsys):
    code, out, _ = run(capsys, "build-rep", "--cartan", HYPERBOLIC, "--lambda", "1,0", "--depth", "3",
                       "--format", "text")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == "total 5 (truncated)"
    cd = new_cartan_datum([[2, -3], [-3, 2]])
    a = [list(r) for r in cd.matrix]
    for line in lines[:-1]:
        coords = tuple(int(x) for x in line.split("(")[1].split(")")[0].split(","))
        diff = Weight((1, 0)) - Weight(coords)
        content = cd.positive_root_combination(diff)
        assert int(line.rsplit(":", 1)[1]) == contravariant_rank(a, (1, 0), content)


def test_output_is_byte_identical(capsys, tmp_path):
    args = ["bar", "--cartan", "B2", "--lambda", "1,0", "--mu", "0,1"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    dest = tmp_path / "out.json"
    run(capsys, *args, "--output", str(dest))
    assert dest.read_text() == a


@pytest.mark.parametrize("cmd", ["tensor", "theta"])
def test_other_subcommands(capsys, cmd):
    code, out, _ = run(capsys, cmd, "--cartan", "A2", "--lambda", "1,0", "--mu", "1,0", "--format", "text")
    assert code == 0 and out.strip()


def test_presets(capsys):
    code, out, _ = run(capsys, "presets")
    assert json.loads(out)["G2"] == [[2, -1], [-3, 2]]


def test_usage_errors(capsys):
    for argv in (
        ["rmatrix", "--cartan", "A1", "--lambda", "1"],
        ["build-rep", "--cartan-matrix", HYPERBOLIC, "--lambda", "1,0"],
        ["build-rep", "--cartan", "A2", "--lambda", "1"],
        ["build-rep", "--cartan", "A2", "--lambda", "1,x"],
        ["build-rep", "--cartan", "A2", "--lambda", "-1,0"],
        ["frobnicate"],
    ):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2, argv
    capsys.readouterr()


def test_library_errors_by_name(capsys):
    code, _, err = run(capsys, "build-rep", "--cartan", "E9", "--lambda", "1")
    assert code == 1 and err.startswith("NotGCM")
    code, _, err = run(capsys, "build-rep", "--cartan-matrix", "[[2,-2],[-2,2]]", "--lambda", "1,0", "--depth", "1")
    assert code == 1 and err.startswith("SingularCartanMatrix")


def test_verify_spec_file(capsys, tmp_path, golden_dir):
    spec = [{"datum": "A1", "lambda": [1], "mu": [1], "third": [1], "golden": "oracle_A1_1_1.json"}]
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run(capsys, "verify", "--spec", str(path), "--golden-dir", str(golden_dir))
    assert code == 0
    report = json.loads(out)
    assert report["ok"] and "timings" not in report


def test_verify_instance_flags(capsys):
    code, out, _ = run(capsys, "verify", "--cartan", HYPERBOLIC, "--lambda", "1,0", "--mu", "1,0", "--depth", "2",
                       "--format", "text")
    assert code == 0 and out.startswith("PASS")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "qkm", "presets", "--format", "text"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.splitlines()[0] == "A1: [[2]]"
