import csv
import hashlib
import json
import subprocess
import sys

import pytest

from neumaier.cli import main
from neumaier.errors import InternalInconsistency


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def manifest_of(err):
    return json.loads(err.strip().splitlines()[-1])


def test_cyclo_table_json(capsys):
    code, out, err = run(capsys, "cyclo", "table", "--p", "7", "--m", "3", "--json")
    assert code == 0
    d = json.loads(out)
    assert sum(map(sum, d["counts"])) == 7 - 2
    assert list(d) == sorted(d)
    m = manifest_of(err)
    assert m["exit_code"] == 0 and m["argv"][:2] == ["cyclo", "table"]


def test_usage_error_is_exit_1(capsys):
    code, _, err = run(capsys, "gamma", "build", "--m", "3", "--json")
    assert code == 1
    assert json.loads(err.splitlines()[0])["error"] == "usage"


def test_validation_error_is_exit_1(capsys):
    code, _, err = run(capsys, "gamma", "build", "--m", "3", "--q1", "5", "--q2", "7", "--json")
    assert code == 1
    e = json.loads(err.splitlines()[0])
    assert e["error"] == "validation" and "does not divide" in e["message"]


def test_directed_gamma_rejected(capsys):
    code, _, err = run(capsys, "gamma", "build", "--m", "2", "--q1", "5", "--q2", "7")
    assert code == 1 and "directed" in err


def test_internal_error_is_exit_2(capsys, monkeypatch):
    import neumaier.coherent as coh

    def broken(spec, t1=None, t2=None):
        raise InternalInconsistency("forced")

    monkeypatch.setattr(coh, "schur_verify", broken)
    code, _, err = run(capsys, "schur", "verify", "--m", "3", "--q1", "4", "--q2", "7", "--json")
    assert code == 2
    assert json.loads(err.splitlines()[0])["error"] == "internal"
    assert manifest_of(err)["exit_code"] == 2


def test_schur_ok(capsys):
    code, out, _ = run(capsys, "schur", "verify", "--m", "4", "--q1", "5", "--q2", "13")
    assert code == 0 and "ok" in out


@pytest.mark.parametrize("suffix", [".g6", ".json"])
def test_round_trip_gamma(tmp_path, capsys, suffix):
    path = tmp_path / f"g{suffix}"
    mpath = tmp_path / "manifest.json"
    code, _, _ = run(capsys, "gamma", "build", "--m", "3", "--q1", "4", "--q2", "7", "--out", str(path),
                     "--manifest", str(mpath))
    assert code == 0
    man = json.loads(mpath.read_text())
    assert man["outputs"] == [{"path": str(path), "sha256": hashlib.sha256(path.read_bytes()).hexdigest()}]
    code, out, _ = run(capsys, "check", "--graph", str(path), "--json")
    rep = json.loads(out)
    assert (rep["v"], rep["k"], rep["lam"], rep["e"], rep["s"]) == (28, 9, 2, 1, 4)
    assert rep["verdict"] == "strictly-neumaier"
    code, out, _ = run(capsys, "wl", "rank", "--graph", str(path), "--json", "--support", "--flags")
    d = json.loads(out)
    assert d["rank"] == 6 and d["flags"]["symmetric"]


def test_round_trip_fixture_omega(tmp_path, capsys):
    path = tmp_path / "omega.g6"
    assert run(capsys, "fixture", "omega", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "check", "--graph", str(path), "--json")
    rep = json.loads(out)
    assert (rep["v"], rep["k"], rep["e"], rep["s"]) == (16, 9, 2, 4)
    code, out, _ = run(capsys, "wl", "rank", "--graph", str(path), "--json", "--spectral")
    assert json.loads(out)["rank"] == 7


def test_check_with_bad_clique(tmp_path, capsys):
    path = tmp_path / "g.g6"
    run(capsys, "fixture", "icosahedron", "--out", str(path))
    code, _, err = run(capsys, "check", "--graph", str(path), "--clique", "0,6")
    assert code == 1 and "not a clique" in err
    code, _, err = run(capsys, "check", "--graph", str(path), "--clique", "a,b")
    assert code == 1


def test_wl_cap_message(tmp_path, capsys):
    path = tmp_path / "g.g6"
    run(capsys, "gamma", "build", "--m", "3", "--q1", "4", "--q2", "7", "--out", str(path))
    code, _, err = run(capsys, "wl", "rank", "--graph", str(path), "--cap", "10")
    assert code == 1 and "cap" in err


def test_missing_graph_file(tmp_path, capsys):
    code, _, _ = run(capsys, "check", "--graph", str(tmp_path / "nope.g6"))
    assert code == 1


def test_search_pairs_csv(tmp_path, capsys):
    path = tmp_path / "hits.csv"
    code, out, _ = run(capsys, "search", "pairs", "--m", "3", "--q1-max", "13", "--csv", str(path),
                       "--threads", "1")
    assert code == 0 and out.strip().endswith("6 pairs")
    raw = path.read_bytes()
    assert b"\r\n" in raw
    rows = list(csv.reader(raw.decode().splitlines()))
    assert rows[0][:3] == ["m", "q1", "q2"]
    assert [(int(r[1]), int(r[2])) for r in rows[1:]] == [(4, 7), (4, 13), (7, 16), (7, 19), (13, 16), (13, 49)]
    assert rows[1][-2:] == ["wl-confirmed", "6"]


def test_search_nexus_text(capsys):
    code, out, _ = run(capsys, "search", "nexus", "--m-max", "4", "--q2-max", "100", "--e-max", "1",
                       "--threads", "1", "--verify", "none")
    assert code == 0
    assert "(3;4,7)" in out and "(4;5,13)" in out


def test_whiteman_and_gk(capsys):
    code, out, _ = run(capsys, "whiteman", "build", "--p", "13", "--q", "5", "--alpha", "2", "--json")
    assert code == 0 and json.loads(out)["n"] == 65
    code, out, _ = run(capsys, "gk", "build", "--json")
    assert code == 0 and json.loads(out)["n"] == 24


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "neumaier.cli", "fixture", "omega", "--json"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["n"] == 16
