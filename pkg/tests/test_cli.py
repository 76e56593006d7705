import json
import math
import subprocess
import sys

import pytest

from threshold_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def write(tmp_path):
    def _write(doc, name="game.json"):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)
    return _write


UNSC_DOC = {"classes": [5, 10], "shift_minimal": [[5, 4]]}
CANADA_DOC = {"classes": [2, 8], "shift_minimal": [[1, 6]]}


# -- analyze ------------------------------------------------------------------------

def test_analyze_unsc(capsys, write):
    code, rep = run_json(capsys, "analyze", write(UNSC_DOC))
    assert code == 0
    assert rep["weighted"] and rep["t"] == 2 and rep["r"] == 1
    assert rep["representation"]["verified"]
    assert rep["trivial_players"]["vetoers"] == [0, 1, 2, 3, 4]
    assert rep["Y"] == [[5, 3], [4, 10]]


def test_analyze_canada(capsys, write):
    code, rep = run_json(capsys, "analyze", write(CANADA_DOC))
    assert code == 0 and rep["weighted"] is False
    assert rep["mp"]["M"] == "1/2"


def test_analyze_weighted_per_player(capsys, write):
    code, rep = run_json(capsys, "analyze", write({"quota": 39, "weights": [7] * 5 + [1] * 10}))
    assert code == 0 and rep["invariants"] == UNSC_DOC
    assert rep["classes"][0] == [0, 1, 2, 3, 4]


def test_analyze_weighted_per_class(capsys, write):
    code, rep = run_json(capsys, "analyze", write({"quota": 39, "class_weights": [7, 1], "classes": [5, 10]}))
    assert rep["invariants"] == UNSC_DOC


def test_analyze_not_complete(capsys, write):
    code, rep = run_json(capsys, "analyze", write({"n": 4, "minimal_winning": [[0, 1], [2, 3]]}))
    assert code == 0 and rep["complete"] is False
    cert = rep["swap_certificate"]
    assert {tuple(cert["x1"]), tuple(cert["x2"])} == {(0, 1), (2, 3)}


def test_analyze_family(capsys):
    code, rep = run_json(capsys, "analyze", "--family", "fm_smallest")
    assert code == 0 and rep["t"] == 3 and rep["weighted"] is False


def test_malformed_json(capsys, write):
    code, out, err = run(capsys, "analyze", write('{"n": 4,\n "minimal_winning": [[0, 1]'))
    assert code == 1 and "line 2" in err


@pytest.mark.parametrize("doc,needle", [
    ({"n": 3}, "exactly one"),
    ({"n": "3", "minimal_winning": [[0]]}, "'n'"),
    ({"n": 3, "minimal_winning": [[0, 5]]}, "minimal_winning[0]"),
    ({"classes": [2, 2], "shift_minimal": [[3, 0]]}, "invalid invariants"),
    ({"quota": 3}, "weights"),
    ({"quota": 3, "weights": [1, 1], "minimal_winning": []}, "exactly one"),
    ([1, 2], "JSON object"),
])
def test_field_diagnostics(capsys, write, doc, needle):
    code, out, err = run(capsys, "analyze", write(doc))
    assert code == 1 and needle in err


def test_missing_file(capsys):
    code, out, err = run(capsys, "analyze", "/nonexistent/game.json")
    assert code == 1 and "cannot read" in err


def test_pretty_output(capsys, write):
    code, out, err = run(capsys, "--pretty", "analyze", write(UNSC_DOC))
    assert code == 0 and "weighted: True" in out
    code, out, err = run(capsys, "analyze", write(UNSC_DOC), "--pretty")
    assert "weighted: True" in out


# -- certify ------------------------------------------------------------------------

def test_certify_canada_invariant(capsys, write):
    code, rep = run_json(capsys, "certify", write(CANADA_DOC), "--mode", "invariant")
    assert code == 0 and rep["status"] == "not-weighted"
    cert = rep["certificate"]
    assert cert["k"] == 2 and cert["mode"] == "invariant-trade"
    assert cert["pre"] == [{"type": [1, 6], "mult": 2}]
    assert cert["post"] == [{"type": [2, 4], "mult": 1}, {"type": [0, 8], "mult": 1}]


def test_certify_expand(capsys, write):
    code, rep = run_json(capsys, "certify", write(CANADA_DOC), "--expand")
    assert rep["transform"]["status"] == "valid-certificate"
    assert len(rep["transform"]["pre"]) == 2


def test_certify_fm_smallest(capsys):
    code, rep = run_json(capsys, "certify", "--family", "fm_smallest", "--mode", "invariant")
    assert code == 0 and rep["certificate"]["k"] == 4


def test_certify_k_out_of_n(capsys, write):
    code, rep = run_json(capsys, "certify", write({"quota": 3, "weights": [1] * 5}))
    assert code == 0 and rep["status"] == "weighted"
    assert rep["representation"]["player_weights"] == [1] * 5
    assert rep["representation"]["quota"] == 3


def test_certify_inconclusive(capsys):
    code, rep = run_json(capsys, "certify", "--family", "fm_smallest", "--mode", "invariant", "--max-k", "3")
    assert code == 2 and rep["status"] == "inconclusive"


def test_certify_not_complete(capsys, write):
    code, rep = run_json(capsys, "certify", write({"n": 4, "minimal_winning": [[0, 1], [2, 3]]}))
    assert code == 0 and "swap_certificate" in rep


def test_certify_deterministic(capsys):
    outs = {run(capsys, "certify", "--family", "n11", "--params", "i=3")[1] for _ in range(3)}
    assert len(outs) == 1


# -- enumerate / formulas / family / convert / scan ----------------------------------

def test_enumerate_csv_row(capsys):
    code, out, err = run(capsys, "enumerate", "--n", "6", "--t", "3", "--csv", "-")
    assert code == 0 and out.strip() == "6,262,256,6,0"


def test_enumerate_range_with_header(capsys):
    code, out, err = run(capsys, "enumerate", "--n", "4..6", "--t", "3", "--csv", "-", "--header")
    lines = out.strip().splitlines()
    assert lines[0] == "n,CG,WG,N-2T,N-3T"
    assert lines[1:] == ["4,6,6,0,0", "5,50,50,0,0", "6,262,256,6,0"]


def test_enumerate_json_and_records(capsys, tmp_path):
    rec = tmp_path / "r.jsonl"
    csvp = tmp_path / "t.csv"
    code, rep = run_json(capsys, "enumerate", "--n", "6", "--t", "3", "--records", str(rec),
                         "--csv", str(csvp), "--extended")
    assert code == 0 and rep["reports"][0]["total"] == 262
    lines = rec.read_text().splitlines()
    assert len(lines) == 262
    assert sum(1 for l in lines if not json.loads(l)["weighted"]) == 6
    assert csvp.read_text().strip() == "6,262,256,6,0,0,0,0,0"


def test_enumerate_bad_range(capsys):
    code, out, err = run(capsys, "enumerate", "--n", "7..3")
    assert code == 1


def test_formulas(capsys):
    code, rep = run_json(capsys, "formulas", "--check", "cg_t2", "--n-max", "10")
    assert code == 0 and rep["all_match"]
    code, out, err = run(capsys, "formulas", "--check", "bogus", "--n-max", "3")
    assert code == 1


def test_family_outputs(capsys):
    code, rep = run_json(capsys, "family", "lemma_5_1", "--params", "m=4")
    assert rep == {"classes": [2, 4, 4], "shift_minimal": [[2, 0, 1], [1, 1, 3]]}
    code, rep = run_json(capsys, "family", "unsc", "--to", "weighted")
    assert rep == {"quota": 39, "class_weights": [7, 1], "classes": [5, 10]}
    code, out, err = run(capsys, "family", "lemma_5_1", "--params", "m=1")
    assert code == 1


def test_convert_weighted_to_explicit(capsys, write):
    code, rep = run_json(capsys, "convert", write({"quota": 3, "weights": [1] * 6}), "--to", "explicit")
    assert rep["n"] == 6 and len(rep["minimal_winning"]) == math.comb(6, 3)


def test_convert_round_trip(capsys, write):
    explicit = {"n": 5, "minimal_winning": [[0, 1], [0, 2, 3], [1, 2, 3, 4]]}
    code, inv = run_json(capsys, "convert", write(explicit), "--to", "invariants")
    assert code == 0
    code, back = run_json(capsys, "convert", write(inv, "inv.json"), "--to", "explicit")
    code, inv2 = run_json(capsys, "convert", write(back, "back.json"), "--to", "invariants")
    assert inv2 == inv


def test_convert_errors(capsys, write):
    code, out, err = run(capsys, "convert", write(CANADA_DOC), "--to", "weighted")
    assert code == 1 and "not weighted" in err
    code, out, err = run(capsys, "convert", write({"n": 4, "minimal_winning": [[0, 1], [2, 3]]}),
                         "--to", "invariants")
    assert code == 1 and "not complete" in err


def test_scan(capsys):
    code, rep = run_json(capsys, "scan", "Q6.1_t3_3TR", "--n-max", "8")
    assert code == 0 and rep["counterexamples"] == []


def test_module_entry_point(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps(CANADA_DOC))
    res = subprocess.run([sys.executable, "-m", "threshold_lab", "certify", str(p)],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["certificate"]["k"] == 2


def test_stdin_input(monkeypatch, capsys):
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(UNSC_DOC)))
    code, rep = run_json(capsys, "analyze", "-")
    assert rep["weighted"]
