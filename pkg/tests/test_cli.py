from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from hellybetti.cli import run
from hellybetti.complexes import simplex_skeleton


def call(argv, stdin_text: str = ""):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdin=io.StringIO(stdin_text), stdout=out, stderr=err)
    payload = json.loads(out.getvalue()) if out.getvalue() else None
    return code, payload, err.getvalue()


@pytest.fixture
def k5(tmp_path):
    path = tmp_path / "k5.json"
    path.write_text(json.dumps(simplex_skeleton(4, 1).to_json()))
    return str(path)


def test_betti(k5):
    assert call(["betti", "--complex", k5, "--reduced"])[:2] == (0, {"betti": [0, 6]})
    assert call(["betti"], json.dumps({"maximal_simplices": [[0, 1, 2]]}))[1] == {"betti": [1, 0, 0]}


def test_obstruction(k5):
    assert call(["obstruction", "--complex", k5, "--dim", "2"])[:2] == (0, {"nonzero": True})
    code, payload, _ = call(["obstruction", "--complex", k5, "--dim", "2", "--details"])
    assert payload["certificate"] and payload["witness"] is None


def test_examples_pipe_into_helly():
    _, fam, _ = call(["examples", "gen", "gamma", "--b", "1", "--d", "2"])
    assert call(["helly"], json.dumps(fam))[:2] == (0, {"helly": 4})
    code, payload, _ = call(["helly", "--witnesses"], json.dumps(fam))
    assert payload["minimal_empty"] == [[0, 1, 2, 3]]


@pytest.mark.parametrize("argv", [
    ["examples", "gen", "gamma", "--b", "2", "--d", "3"],
    ["examples", "gen", "skeleton", "--n", "5", "--k", "1"],
    ["examples", "gen", "interval", "--n", "3"],
    ["examples", "gen", "tight", "--d", "3", "--k", "2", "--n", "5"],
])
def test_examples_roundtrip(argv):
    code, fam, _ = call(argv)
    assert code == 0
    again = call(["audit", "--dim", "2"], json.dumps(fam))
    assert again[0] == 0 and again[1]["subfamilies"] >= 1


def test_examples_gamma3prime_and_missing_params():
    code, k, _ = call(["examples", "gen", "gamma3prime"])
    assert code == 0 and len(k["maximal_simplices"]) == 8
    assert call(["betti", "--reduced"], json.dumps(k))[1] == {"betti": [0, 0, 0, 0]}
    assert call(["examples", "gen", "gamma", "--b", "1"])[0] == 2


def test_audit_exit_codes():
    _, fam, _ = call(["examples", "gen", "gamma", "--b", "2", "--d", "2"])
    code, payload, _ = call(["audit", "--dim", "2", "--b", "2"], json.dumps(fam))
    assert code == 0 and payload["holds"]
    code, payload, _ = call(["audit", "--dim", "2", "--max-degree", "1", "--b", "1"], json.dumps(fam))
    assert code == 1 and not payload["holds"]


def test_deleted_product_subdivide_eml(k5):
    assert call(["deleted-product", "--complex", k5, "--quotient"])[1] == {
        "cells": [20, 60, 30], "betti": [1, 12, 1], "quotient_cells": [10, 30, 15], "quotient_betti": [1, 7, 1],
    }
    code, sd, _ = call(["subdivide"], json.dumps({"maximal_simplices": [[0, 1, 2]]}))
    assert len(sd["labels"]) == 7 and len(sd["complex"]["maximal_simplices"]) == 6
    code, eml, _ = call(["eml", "--p", "2", "--q", "1"])
    assert eml["count"] == 3 and eml["flip_equivariant"]


def test_build_and_verify(tmp_path):
    _, fam, _ = call(["examples", "gen", "skeleton", "--n", "5", "--k", "1"])
    fpath = tmp_path / "f.json"
    fpath.write_text(json.dumps(fam))
    path = json.dumps({"maximal_simplices": [[0, 1], [1, 2]]})
    code, out, _ = call(["build-ccm", "--family", str(fpath), "--b", "1"], path)
    assert code == 0 and out["verification"]["ok"] and out["verification"]["almost_embedding"]
    code, report, _ = call(["verify", "constrained"], json.dumps(out))
    assert code == 0 and report["ok"]
    broken = out["bundle"]
    broken["phi"]["0"] = []
    code, report, _ = call(["verify", "constrained"], json.dumps(broken))
    assert code == 1 and not report["ok"]


def test_build_ccm_insufficient(tmp_path):
    _, fam, _ = call(["examples", "gen", "skeleton", "--n", "4", "--k", "1"])
    fpath = tmp_path / "f.json"
    fpath.write_text(json.dumps(fam))
    k5 = json.dumps(simplex_skeleton(4, 1).to_json())
    code, out, _ = call(["build-ccm", "--family", str(fpath), "--b", "1"], k5)
    assert code == 1 and not out["ok"]
    code, out, _ = call(["build-ccm", "--family", str(fpath), "--b", "1", "--dim-cap", "0"], k5)
    assert code == 1  # five points need five members


def test_input_errors():
    assert call(["betti"], "{")[0] == 2
    assert call(["nope"])[0] == 2
    assert call([])[0] == 2
    assert call(["betti", "--complex", "/nonexistent.json"])[0] == 2
    assert call(["betti"], json.dumps({"vertices": [0]}))[0] == 2
    assert call(["--budget", "bogus", "eml", "--p", "1", "--q", "1"])[0] == 2


def test_budget_flag_and_env(k5, monkeypatch):
    assert call(["--budget", "cells=10", "deleted-product", "--complex", k5])[0] == 3
    _, fam, _ = call(["examples", "gen", "gamma", "--b", "1", "--d", "2"])
    monkeypatch.setenv("HB_BUDGET", "family=3")
    assert call(["helly"], json.dumps(fam))[0] == 3
    monkeypatch.setenv("HB_BUDGET", "10")
    assert call(["deleted-product", "--complex", k5])[0] == 3


def test_selftest_is_reproducible():
    first = call(["selftest"])
    second = call(["selftest"])
    assert first == second
    code, report, _ = first
    assert report["total"] == 9
    assert code == (0 if report["passed"] == 9 else 1)


def test_console_entry_point(k5):
    proc = subprocess.run(
        [sys.executable, "-m", "hellybetti", "betti", "--complex", k5],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"betti": [1, 6]}
