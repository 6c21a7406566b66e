import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from kahlerweyl.cli import main
from kahlerweyl.curvature import higa_xi
from kahlerweyl.space import build_space
from kahlerweyl.tensor import Tensor


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dims_json(capsys):
    code, out, _ = run(capsys, "dims", "--kind", "para", "--sig", "1,1")
    assert code == 0
    data = json.loads(out)
    assert data["dims"]["K_W"] == 14 and data["dims"]["K_R"] == 9 and data["dims"]["W"] == 26
    assert data["summary"] == "K_W: 14, K_R: 9, Lambda2_0: 5"


def test_dims_m6_modular_csv(capsys):
    code, out, _ = run(capsys, "dims", "--m", "6", "--sig", "1,1,-1", "--rank-mode", "modular",
                       "--format", "csv")
    assert code == 0
    rows = dict(r for r in csv.reader(io.StringIO(out)) if len(r) == 2)
    assert rows["K_W"] == "36" and rows["U3"] == "12"
    assert rows["summary"] == "K_W = K_R: 36"


@pytest.mark.parametrize("argv", [
    ["dims", "--m", "5"],
    ["dims", "--m", "2"],
    ["dims", "--kind", "para", "--sig", "1,-1"],
    ["dims", "--kind", "quaternion"],
    ["dims", "--sig", "1,1,1"],
    ["dims", "--sig", "a,b"],
    ["verify", "lemma41", "--m", "6"],
    ["verify", "lemma41", "--f", "x1*"],
    ["verify", "lemma41", "--f", "x2*x3"],
    ["verify", "lemma41", "--degree", "3"],
    ["verify", "thm15", "--samples", "0"],
    ["verify", "thm23", "--f", "x1"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_verify_lemma41_markdown(capsys):
    code, out, _ = run(capsys, "verify", "lemma41", "--kind", "complex", "--sig", "1,-1",
                       "--f", "x1*x3/4", "--format", "md")
    assert code == 0
    assert "dx1^dx3" in out and "FAIL" not in out


def test_verify_thm15_is_deterministic(capsys, tmp_path):
    argv = ["verify", "thm15", "--sig", "1,-1", "--samples", "4", "--seed", "7"]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run(capsys, *argv, "--out", str(a))[0] == 0
    assert run(capsys, *argv, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    assert report["suite"] == "thm15" and all(c["pass"] for c in report["checks"])


def test_decompose_two_form(capsys, tmp_path):
    space = build_space("complex", 1, 1)
    p = tmp_path / "omega.json"
    p.write_text(space.omega.to_json())
    code, out, _ = run(capsys, "decompose", "--input", str(p))
    assert code == 0
    data = json.loads(out)
    assert data["components"]["omega_part"]["share"] == "1"
    assert data["resolution_residual_zero"]


def test_decompose_xi_omega(capsys, tmp_path):
    space = build_space("complex", 1, -1)
    p = tmp_path / "xi.json"
    p.write_text(higa_xi(space, space.omega).to_json())
    code, out, _ = run(capsys, "decompose", "--sig", "1,-1", "--input", str(p))
    assert code == 0
    comps = json.loads(out)["components"]
    assert comps["L"]["share"] == "1" and comps["R"]["zero"]
    assert comps["W minus K_W"]["share"] == "1"


@pytest.mark.parametrize("content", ["{not json", json.dumps({"rank": 3})])
def test_decompose_bad_input(capsys, tmp_path, content):
    p = tmp_path / "bad.json"
    p.write_text(content)
    assert run(capsys, "decompose", "--input", str(p))[0] == 2


def test_decompose_wrong_rank(capsys, tmp_path):
    p = tmp_path / "r3.json"
    p.write_text(Tensor(np.zeros((4, 4, 4), dtype=object)).to_json())
    assert run(capsys, "decompose", "--input", str(p))[0] == 2
    assert run(capsys, "decompose", "--input", str(tmp_path / "missing.json"))[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kahlerweyl", "dims", "--format", "md"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "| K_W | 14 |" in proc.stdout
