import json
import subprocess
import sys

import pytest

from frostflow.cli import main

CANTOR4 = {"kind": "cantor", "ratios": ["4/1"]}


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    return {
        "cantor4": write(tmp_path / "cantor4.json", CANTOR4),
        "cantor3": write(tmp_path / "cantor3.json", {"kind": "cantor", "ratios": ["3/1"]}),
        "point": write(tmp_path / "point.json", {"kind": "point", "x": "0/1"}),
        "zero": write(tmp_path / "zero.json", {"depth": 3, "entries": []}),
        "dir": tmp_path,
    }


def test_content_example(capsys, files):
    assert run(capsys, "content", "--set", files["cantor4"], "--s", "1/2", "--depth", "12") == (0, "1/1\n", "")


def test_frost_then_check(capsys, files):
    out = str(files["dir"] / "m.json")
    code, _, _ = run(capsys, "frost", "--set", files["cantor4"], "--s", "1/2", "--k", "1", "--depth", "12", "--out", out)
    assert code == 0
    doc = json.loads(open(out).read())
    assert doc["certificate"]["verdict"] == "found" and doc["total"] == "1/2"
    assert run(capsys, "check-frostman", "--measure", out, "--s", "1/2")[:2] == (0, "ok\n")
    code, stdout, _ = run(capsys, "check-frostman", "--measure", out, "--s", "1/1")
    assert code == 1 and stdout.startswith("violation")


def test_frost_refuted_exit_code(capsys, files):
    code, out, _ = run(capsys, "frost", "--set", files["point"], "--s", "1/2", "--k", "1", "--depth", "4")
    assert code == 3
    assert json.loads(out)["certificate"] == {
        "bound": "1/4", "depth": 4, "k": 1, "s": "1/2", "stage": 4, "verdict": "refuted"
    }


def test_maxflow_zero(capsys, files):
    assert run(capsys, "maxflow", "--cap", files["zero"])[:2] == (0, "0/1\n")
    assert run(capsys, "maxflow", "--cap", files["zero"], "--iterate", "4")[:2] == (0, "0/1\n")


def test_maxflow_example_and_witness(capsys, files):
    cap = write(files["dir"] / "cap.json", {"depth": 2, "entries": [
        ["", "1/1"], ["0", "3/10"], ["1", "1/2"], ["00", "1/5"], ["01", "1/5"], ["10", "1/5"], ["11", "1/5"]]})
    witness = str(files["dir"] / "w.json")
    assert run(capsys, "maxflow", "--cap", cap, "--out", witness)[:2] == (0, "7/10\n")
    # the witness flow file is itself a valid capacity file
    assert run(capsys, "maxflow", "--cap", witness)[:2] == (0, "7/10\n")


def test_exit_codes(capsys, files):
    bad_json = files["dir"] / "bad.json"
    bad_json.write_text("{not json")
    assert run(capsys, "content", "--set", str(bad_json), "--s", "1/2", "--depth", "3")[0] == 4
    float_rat = write(files["dir"] / "f.json", {"kind": "cantor", "ratios": [4.0]})
    assert run(capsys, "content", "--set", float_rat, "--s", "1/2", "--depth", "3")[0] == 4
    small = write(files["dir"] / "s.json", {"kind": "cantor", "ratios": ["3/2"]})
    assert run(capsys, "content", "--set", small, "--s", "1/2", "--depth", "3")[0] == 2
    nonadd = write(files["dir"] / "n.json", {"depth": 1, "mass": [["", "1/1"], ["0", "1/2"], ["1", "1/4"]]})
    code, _, err = run(capsys, "check-frostman", "--measure", nonadd, "--s", "1/2")
    assert code == 2 and "''" in err
    assert run(capsys, "content", "--set", str(files["dir"] / "missing.json"), "--s", "1/2", "--depth", "3")[0] == 4
    with pytest.raises(SystemExit) as exc:
        main(["no-such-verb"])
    assert exc.value.code == 5
    with pytest.raises(SystemExit) as exc:
        main(["content", "--set", files["cantor4"], "--s", "x", "--depth", "3"])
    assert exc.value.code == 5
    assert run(capsys, "cantor", "--level", "2")[0] == 5


def test_help_lists_every_verb(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for verb in ("cantor", "cantor-dim", "content", "dim", "frost", "strict-frost", "support", "overt-measure",
                 "concentrate", "perfect-core", "maxflow", "check-frostman", "shmerkin", "local-dim"):
        assert verb in out


def test_cantor_and_dim_tables(capsys, files):
    code, out, _ = run(capsys, "cantor", "--ratios", "4", "--level", "2")
    assert code == 0 and json.loads(out)["cells"][1] == ["01", "3/16", "1/4"]
    code, out, _ = run(capsys, "cantor-dim", "--set", files["cantor3"], "--n", "3")
    assert code == 0 and out.splitlines()[1].startswith("0,3/1,0.630929753571")
    csv_path = files["dir"] / "content.csv"
    code, out, _ = run(capsys, "dim", "--set", files["cantor4"], "--depth", "12", "--grid", "4", "--csv", str(csv_path))
    assert code == 0 and json.loads(out)["lo"] == "1/2"
    assert csv_path.read_text().splitlines()[0] == "s,content"


def test_measure_pipeline_round_trips(capsys, files):
    d = files["dir"]
    strict = str(d / "strict.json")
    assert run(capsys, "strict-frost", "--set", files["cantor4"], "--s", "1/2", "--depth", "8", "--out", strict)[0] == 0
    support = str(d / "support.json")
    assert run(capsys, "support", "--measure", strict, "--out", support)[0] == 0
    assert run(capsys, "content", "--set", support, "--s", "0", "--depth", "2")[0] == 0
    conc = str(d / "conc.json")
    assert run(capsys, "concentrate", "--measure", strict, "--out", conc)[0] == 0
    assert json.loads(open(conc).read())["concentration"]["k"] == 0
    assert run(capsys, "check-frostman", "--measure", conc, "--s", "1/2")[0] == 0
    overt = str(d / "overt.json")
    assert run(capsys, "overt-measure", "--set", files["cantor3"], "--k", "5", "--out", overt)[0] == 0
    assert json.loads(open(overt).read())["total"] == "31/32"
    code, out, _ = run(capsys, "local-dim", "--measure", strict, "--chain", "00000000", "--levels", "2,4,8")
    assert code == 0 and out.splitlines()[1:] == ["2,0.500000000000", "4,0.500000000000", "8,0.500000000000"]


def test_perfect_core_round_trip(capsys, files):
    out = str(files["dir"] / "pc.json")
    assert run(capsys, "perfect-core", "--set", files["cantor3"], "--budget", "40", "--out", out)[0] == 0
    doc = json.loads(open(out).read())
    assert doc["kind"] == "perfect-core" and doc["budget"] == 40
    assert run(capsys, "content", "--set", out, "--s", "0", "--depth", "4")[0] == 0


def test_shmerkin_verbs(capsys, files):
    cells = str(files["dir"] / "cells.json")
    code, out, _ = run(capsys, "shmerkin", "--p", "0101", "--ratios", "3", "--depth", "10", "--out", cells)
    assert code == 0 and all(line.endswith(",1/1") for line in out.splitlines()[1:])
    code, out, _ = run(capsys, "local-dim", "--measure", cells, "--chain", "0000000000", "--levels", "10")
    assert code == 2  # bit p(1) = 0 but p(2) = 1 forces position 4 to be 1
    code, out, _ = run(capsys, "local-dim", "--measure", cells, "--chain", "0001000000", "--levels", "10")
    assert code == 0
    code, out, _ = run(capsys, "local-dim", "--p", "0" * 10, "--ratios", "3", "--chain", "0" * 100, "--levels", "100")
    assert code == 0 and out.splitlines()[1].startswith("100,0.5")


def test_deterministic_output_files(files):
    outs = []
    for i in range(2):
        path = files["dir"] / f"det{i}.json"
        subprocess.run([sys.executable, "-m", "frostflow", "frost", "--set", files["cantor4"], "--s", "1/2",
                        "--k", "1", "--depth", "10", "--out", str(path)], check=True)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
