import csv
import io
import json

import pytest

from colex import gallery
from colex.abwt import Abwt
from colex.automaton import isomorphic, load, parse, serialize
from colex.cli import main


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, a in [("running", gallery.running_dfa()), ("fan", gallery.fan_dfa()),
                    ("split", gallery.fan_dfa_split_k()), ("nfa", gallery.chain_nfa()),
                    ("stair", gallery.staircase_dfa(2))]:
        path = tmp_path / f"{name}.aut"
        path.write_text(serialize(a))
        out[name] = str(path)
    out["dir"] = tmp_path
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_validate(files, capsys, tmp_path):
    code, out, _ = run(capsys, "validate", files["running"], "--json")
    rep = json.loads(out)
    assert code == 0 and rep["deterministic"] and rep["trim"] and rep["states"] == 7
    bad = tmp_path / "bad.aut"
    bad.write_text("alphabet a\nstates 2\nsource 1\nfinals 1\n")
    code, out, _ = run(capsys, "validate", str(bad), "--json")
    assert code == 1 and json.loads(out)["unreachable"] == [2]


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "x.aut"
    bad.write_text("alphabet a\nstates two\n")
    code, _, err = run(capsys, "width", str(bad))
    assert code == 2 and "error" in err
    code, out, _ = run(capsys, "width", str(bad), "--json")
    assert code == 2 and json.loads(out)["error"] == "FormatError"
    code, _, _ = run(capsys, "width", str(tmp_path / "missing.aut"))
    assert code == 2


def test_width_and_chains(files, capsys):
    assert json.loads(run(capsys, "width", files["fan"])[1])["width"] == 3
    rep = json.loads(run(capsys, "width", files["split"])[1])
    assert rep["width"] == 2 and len(rep["antichain"]) == 2
    assert json.loads(run(capsys, "width", files["running"])[1])["width"] == 2
    code, out, _ = run(capsys, "width", files["nfa"], "--json")
    rep = json.loads(out)
    assert rep == {"width": 1, "order": "exhaustive", "antichain": rep["antichain"]}
    assert json.loads(run(capsys, "width", files["nfa"], "--order", "greedy", "--json")[1])["order"] == "greedy"
    _, out, _ = run(capsys, "chains", files["running"])
    assert json.loads(out)["chains"] == [[1, 2, 3, 4], [5, 6, 7]]


def test_order_dot(files, capsys):
    code, out, _ = run(capsys, "order", files["running"])
    assert code == 0 and out.startswith("digraph") and "->" in out


def test_minimize(files, capsys, tmp_path):
    dest = tmp_path / "min.aut"
    assert run(capsys, "minimize", files["split"], "-o", str(dest))[0] == 0
    assert isomorphic(load(dest), gallery.fan_dfa())
    code, out, _ = run(capsys, "minimize", files["nfa"])
    assert code == 0 and parse(out).is_deterministic()


def test_powerset(files, capsys):
    code, out, _ = run(capsys, "powerset", files["nfa"], "--p", "1")
    assert code == 0
    stats = json.loads(out.strip().splitlines()[-1].removeprefix("# stats "))
    assert stats["nfa_states"] == 6 and stats["states_ok"] and stats["width_ok"]
    assert parse(out).n == stats["dfa_states"]


def test_powerset_cap(files, capsys):
    code, out, _ = run(capsys, "powerset", files["nfa"], "--cap", "1", "--json")
    assert code == 3 and json.loads(out)["exit_code"] == 3


def test_equiv_and_member(files, capsys):
    assert run(capsys, "equiv", files["fan"], files["split"])[0] == 0
    code, out, _ = run(capsys, "equiv", files["fan"], files["running"])
    assert code == 2  # alphabets differ
    assert run(capsys, "member", files["running"], "abaa")[1].strip() == "accepted"
    code, out, _ = run(capsys, "member", files["running"], "cc", "--json")
    assert code == 1 and json.loads(out) == {"word": "cc", "accepted": False}


def test_lang_width(files, capsys):
    code, out, _ = run(capsys, "lang-width", files["fan"], "--p", "1", "--cap", "6")
    rep = json.loads(out)
    assert code == 1 and rep["answer"] == "gt" and rep["certificate_replayed"]
    assert rep["certificate"]["gamma"] == "c"
    code, out, _ = run(capsys, "lang-width", files["fan"], "--p", "2", "--mode", "exact")
    assert code == 0 and json.loads(out)["answer"] == "leq"
    assert run(capsys, "lang-width", files["fan"], "--p", "1")[0] == 2
    code, _, _ = run(capsys, "lang-width", files["stair"], "--p", "1", "--mode", "exact",
                     "--budget-bytes", "1000")
    assert code == 3


def test_abwt_roundtrip(files, capsys, tmp_path):
    t = tmp_path / "r.abwt"
    code, out, _ = run(capsys, "abwt", "build", files["running"], "-o", str(t), "--dump")
    assert code == 0 and "CHAIN 1000100" in out
    assert "IN_DEG 10100100101010001" in run(capsys, "abwt", "dump", str(t))[1]
    code, out, _ = run(capsys, "abwt", "invert", str(t))
    assert code == 0 and isomorphic(parse(out), gallery.running_dfa())
    assert Abwt.load(t).p == 2


def test_abwt_invert_nfa(files, capsys, tmp_path):
    t = tmp_path / "n.abwt"
    run(capsys, "abwt", "build", files["nfa"], "-o", str(t))
    code, _, err = run(capsys, "abwt", "invert", str(t))
    assert code == 2 and "error" in err
    code, out, _ = run(capsys, "abwt", "invert", str(t), "--exhaustive", "--json")
    assert code == 2 and json.loads(out)["error"] == "InversionError"


def test_index(files, capsys, tmp_path, monkeypatch):
    ix = tmp_path / "r.idx"
    assert run(capsys, "index", "build", files["running"], "-o", str(ix))[0] == 0
    assert json.loads(run(capsys, "index", "query", str(ix), "--op", "locate", "--pattern", "a")[1]) == [2, 3, 5]
    assert run(capsys, "index", "query", str(ix), "--op", "count", "--pattern", "aa")[1].strip() == "2"
    assert run(capsys, "index", "query", str(ix), "--pattern", "cc")[0] == 1
    assert run(capsys, "index", "query", str(ix), "--op", "member", "--pattern", "abaa")[0] == 0
    assert run(capsys, "index", "query", str(ix))[0] == 2
    monkeypatch.setattr("sys.stdin", io.StringIO("a\nab\ncc\n"))
    code, out, _ = run(capsys, "index", "query", str(ix), "--batch", "--op", "locate")
    rows = [json.loads(x) for x in out.splitlines()]
    assert [r["locate"] for r in rows] == [[2, 3, 5], [6, 7], []]
    # from a stored transform as well
    t = tmp_path / "r.abwt"
    run(capsys, "abwt", "build", files["running"], "-o", str(t))
    ix2 = tmp_path / "r2.idx"
    assert run(capsys, "index", "build", str(t), "-o", str(ix2))[0] == 0
    assert ix.read_bytes() == ix2.read_bytes()


def test_bench(capsys, tmp_path):
    dest, fig = tmp_path / "b.csv", tmp_path / "b.png"
    code, _, _ = run(capsys, "bench", "--sizes", "4,8", "--reps", "1", "--patterns", "5",
                     "--csv", str(dest), "--figure", str(fig))
    assert code == 0
    rows = list(csv.DictReader(dest.open()))
    assert list(rows[0]) == ["op", "n", "e", "sigma", "p", "wall_ns"]
    assert {r["n"] for r in rows} == {"4", "8"}
    assert all(int(r["wall_ns"]) > 0 and int(r["p"]) >= 1 for r in rows)
    assert fig.read_bytes()[:4] == b"\x89PNG"
    code, out, _ = run(capsys, "bench", "--sizes", "4", "--reps", "1", "--patterns", "2")
    assert out.startswith("op,n,e,sigma,p,wall_ns\n")


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 7 and all(x.startswith("PASS") for x in lines)


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["width"])
    assert err.value.code == 2
