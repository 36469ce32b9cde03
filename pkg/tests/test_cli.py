import json
import subprocess
import sys

import pytest

from galeroot.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def coeffs(p):
    return [int(c) for c in p["coeffs"]]


def test_compute_all_methods(capsys):
    code, out = run(capsys, "compute", "--k", "3", "--r", "1,1,1", "--what", "both", "--method", "all")
    d = json.loads(out)
    assert code == 0 and d["agree"] is True
    assert coeffs(d["g"]) == [1, 2] and coeffs(d["h"]) == [1, 3, 3, 1]


def test_compute_k2_and_k1(capsys):
    _, out = run(capsys, "compute", "--k", "2", "--r", "4", "--what", "h")
    assert coeffs(json.loads(out)["h"]) == [1, 2, 3, 4, 3, 2, 1]
    _, out = run(capsys, "compute", "--k", "1")
    d = json.loads(out)
    assert coeffs(d["g"]) == coeffs(d["h"]) == [1]


def test_faces(capsys):
    code, out = run(capsys, "faces", "--k", "3", "--r", "1,1,1", "--verify")
    d = json.loads(out)
    assert code == 0 and d["f_vector"] == [6, 9, 5] and d["verification"]["ok"]


def test_certify_and_components(capsys):
    _, out = run(capsys, "certify", "--k", "4", "--r", "1,1,1,1,1,1", "--theta=2,-3,2,-1")
    assert json.loads(out)["small"] is True
    _, out = run(capsys, "components", "--k", "4", "--r", "1,1,1,1,1,1")
    comps = json.loads(out)["components"]
    assert len(comps) == 6 and all(coeffs(c["poincare"]) == [1, 0, 2, 0, 2, 0, 1] for c in comps)


def test_fiber_and_ring(capsys):
    _, out = run(capsys, "fiber", "--k", "3", "--face", "1.1.0.0.0.0")
    assert coeffs(json.loads(out)["report"]["poincare"]) == [1, 0, 1]
    _, out = run(capsys, "ring", "--k", "3", "--r", "2,1,1")
    d = json.loads(out)
    assert d["matches_g"] and coeffs(d["hilbert"]) == coeffs(d["g"])


def test_csv(capsys):
    _, out = run(capsys, "compute", "--k", "2", "--r", "4", "--what", "h", "--format", "csv")
    assert out.strip() == "h,1,2,3,4,3,2,1"


@pytest.mark.parametrize("argv, code", [
    (["compute", "--k", "3", "--r", "1,1"], 2),
    (["compute", "--k", "3", "--r", "1,0,1"], 2),
    (["compute", "--k", "6", "--budget", "10"], 3),
    (["fiber", "--k", "3", "--theta", "0,0,0"], 4),
    (["certify", "--k", "3", "--theta", "1,1,1"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert main(argv) == code


def test_cache_identity(capsys, tmp_path):
    argv = ["faces", "--k", "3", "--r", "2,1,1", "--cache-dir", str(tmp_path)]
    _, cold = run(capsys, *argv)
    assert any(tmp_path.iterdir())
    _, warm = run(capsys, *argv)
    _, fresh = run(capsys, *argv[:-2], "--no-cache")
    assert cold == warm == fresh


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "galeroot", "compute", "--k", "3", "--no-cache"],
                         capture_output=True, text=True, check=True).stdout
    assert coeffs(json.loads(out)["g"]) == [1, 2]
