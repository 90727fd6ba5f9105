import json
import subprocess
import sys

import pytest

from scld.cli import main
from scld.code import code_to_json
from scld.constructions import packing_to_scld, projective_plane, x3_code


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def x3_file(tmp_path):
    path = tmp_path / "c.json"
    assert run("construct", "--family", "x3", "--l", 4, "--out", path) == 0
    return path


def test_construct_verify_pipeline(x3_file, tmp_path):
    out = tmp_path / "v.json"
    assert run("verify", "--code", x3_file, "--t", 2, "--property", "scld", "--out", out) == 0
    rep = json.loads(out.read_text())
    assert rep["holds"] is True and rep["minimal_list_size"] == 12


def test_bounds_table2(capsys):
    assert run("bounds", "--table", 2) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t,2,3,4,5,6"
    sc = [float(x) for x in lines[1].split(",")[2:]]
    assert all(abs(a - b) < 5e-5 for a, b in zip(sc, [0.13834, 0.06198, 0.03138, 0.02003]))


def test_bounds_family(capsys):
    assert run("bounds", "--family", "hld-alpha", "--t", 2, "--alpha", 0.5) == 0
    rep = json.loads(capsys.readouterr().out)
    assert abs(rep["value"] - 0.643856) < 1e-6


def test_missing_evidence_is_usage_error(x3_file, tmp_path):
    assert run("trace", "--code", x3_file, "--evidence", tmp_path / "missing.json") == 2


def test_malformed_code_is_usage_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"q": 2, "n": 3}')
    assert run("verify", "--code", bad, "--t", 2, "--property", "sc") == 2


def test_unknown_flag():
    with pytest.raises(SystemExit) as exc:
        run("verify", "--bogus")
    assert exc.value.code == 2


def test_missing_family_params():
    assert run("construct", "--family", "plane") == 2


def test_domain_error_exit_1(capsys):
    assert run("bounds", "--family", "qary", "--t", 3, "--L", 3) == 1
    assert "list size below" in capsys.readouterr().err


def test_trace_no_match_exit_1(x3_file, tmp_path):
    ev = tmp_path / "e.json"
    ev.write_text('{"q": 2, "n": 8, "sets": [[0], [0], [0], [0], [0], [0], [0], [1]]}')
    assert run("trace", "--code", x3_file, "--evidence", ev) == 1


@pytest.mark.parametrize(
    "code",
    [x3_code(3), x3_code(4), packing_to_scld(projective_plane(2))],
    ids=["x3-3", "x3-4", "plane-2"],
)
def test_attack_trace_round_trip(code, tmp_path, capsys):
    cpath = tmp_path / "c.json"
    cpath.write_text(code_to_json(code))
    for J in ([0], [1, 5], [2, code.M - 1]):
        ev = tmp_path / "ev.json"
        assert run("attack", "--code", cpath, "--coalition", ",".join(map(str, J)), "--out", ev) == 0
        out = tmp_path / "tr.json"
        assert run("trace", "--code", cpath, "--evidence", ev, "--t", 2, "--out", out) == 0
        assert json.loads(out.read_text())["coalition"] == sorted(J)


def test_signal_attack_then_x3_trace(tmp_path):
    cpath, ev, out = tmp_path / "c.json", tmp_path / "e.json", tmp_path / "t.json"
    cpath.write_text(code_to_json(x3_code(5)))
    args = ("attack", "--code", cpath, "--coalition", "3,17", "--signal", "--weights", "0.3,0.7", "--out", ev)
    assert run(*args) == 0
    assert run("trace", "--algorithm", "x3", "--l", 5, "--evidence", ev, "--out", out) == 0
    assert json.loads(out.read_text())["coalition"] == [3, 17]


def test_byte_determinism(tmp_path):
    paths = []
    for k in range(2):
        p = tmp_path / f"r{k}.json"
        assert run("--seed", 42, "construct", "--family", "random", "--n", 10, "--t", 2, "--M", 30, "--out", p) == 0
        paths.append(p.read_bytes())
    assert paths[0] == paths[1]
    other = tmp_path / "r2.json"
    run("construct", "--family", "random", "--n", 10, "--t", 2, "--M", 30, "--seed", 43, "--out", other)
    assert other.read_bytes() != paths[0]


def test_dynamic_sim_deterministic(tmp_path):
    outs = []
    for threads in (1, 2):
        p = tmp_path / f"d{threads}.jsonl"
        args = ("dynamic-sim", "--users", 16, "--t", 2, "--trials", 100, "--seed", 1, "--threads", threads, "--out", p)
        assert run(*args) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    summary = json.loads(outs[0].decode().splitlines()[-1])["summary"]
    assert summary["recovered"] == 100


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "scld", "bounds", "--family", "sc", "--t", "3"], capture_output=True)
    assert res.returncode == 0
    assert abs(json.loads(res.stdout)["value"] - 0.13834) < 5e-5
