import io
import json
import subprocess
import sys

import pytest

from _corpus import P1, P2, P3, hyperplane
from toripos import corpus
from toripos.cli import main, run
from toripos.io import bundle_to_json, divisor_to_json, fan_to_json, polytope_to_json
from toripos.klyachko import direct_sum, line_bundle, tangent_bundle_of
from toripos.polytope import dilate, hull

E11 = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)])
E12 = hull([(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 1, 3)])


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return _write


@pytest.fixture
def tp2(write):
    return write("tp2.json", bundle_to_json(tangent_bundle_of(P2)))


def test_fan_validate(write):
    code, rep, _ = run(["fan", "validate", write("p2.json", fan_to_json(P2))])
    assert code == 0 and rep["valid"] and rep["complete"] and rep["smooth"] and rep["walls"] == 3
    partial = {"rank": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "cones": [[0, 1], [1, 2]]}
    code, rep, _ = run(["fan", "validate", write("partial.json", partial)])
    assert code == 1 and rep["complete"] is False
    code, rep, _ = run(["fan", "validate", "--no-complete", write("partial2.json", partial)])
    assert code == 0


def test_bundle_validate(tp2, write):
    code, rep, _ = run(["bundle", "validate", tp2])
    assert code == 0 and rep["valid"] and rep["rank"] == 2
    assert sorted(rep["decompositions"]) == ["0", "1", "2"]


def test_invalid_bundle(write):
    # four distinct lines on P^3: rank 2 data that no cone can split
    lines = [["1", "0"], ["0", "1"], ["1", "1"], ["1", "2"]]
    doc = {
        "fan": fan_to_json(P3),
        "rank": 2,
        "filtrations": {
            str(k): [{"threshold": 0, "basis": [["1", "0"], ["0", "1"]]}, {"threshold": 1, "basis": [line]}]
            for k, line in enumerate(lines)
        },
    }
    code, rep, _ = run(["bundle", "validate", write("bad.json", doc)])
    assert code == 1 and rep["error"] == "invalid_klyachko_data"


def test_restrict(tp2):
    code, rep, _ = run(["restrict", tp2, "--wall", "0"])
    assert code == 0 and rep["degrees"] == [1, 2]
    code, rep2, _ = run(["restrict", tp2, "--wall", "0,1"])
    assert code == 0 and rep2["degrees"] == [1, 2]
    code, rep, _ = run(["restrict", tp2, "--wall", "9"])
    assert code == 1 and rep["error"] == "malformed_input"


def test_positivity(tp2, write):
    code, rep, _ = run(["positivity", tp2])
    assert code == 0
    assert rep["nef"] and rep["ample"] and not rep["trivial"] and rep["tau"] == 1 and rep["seshadri"] == 1
    code, rep, _ = run(["positivity", tp2, "--at", "2"])
    assert rep["seshadri"] == 1
    neg = write("neg.json", divisor_to_json(hyperplane(P2).scaled(-1)))
    code, rep, _ = run(["positivity", neg])
    assert code == 0 and not rep["nef"] and rep["seshadri"] is None


def test_sections(tp2, write):
    code, rep, _ = run(["sections", "--h0", tp2])
    assert code == 0 and rep["h0"] == 8
    code, rep, _ = run(["sections", tp2, "--nonvanishing-at", "1"])
    assert code == 0 and rep["nonvanishing"]["cone"] == 1
    b = direct_sum(line_bundle(hyperplane(P2).scaled(2)), line_bundle(hyperplane(P2)))
    code, rep, _ = run(["sections", "--h0", write("o21.json", bundle_to_json(b))])
    assert rep["h0"] == 9
    neg = write("neg.json", divisor_to_json(hyperplane(P2).scaled(-1)))
    code, rep, _ = run(["sections", neg, "--nonvanishing-at", "0"])
    assert code == 1 and rep["error"] == "not_nef"


def test_blowup_and_qtwist(tp2):
    code, rep, _ = run(["blowup", tp2, "--cone", "0", "--m", "1"])
    assert code == 0 and rep["nef"] and rep["new_ray"] == 3
    code, rep, _ = run(["qtwist", tp2, "--lambda", "1", "--cone", "0"])
    assert code == 0 and rep["nef"] and rep["lambda"] == "1"
    code, rep, _ = run(["qtwist", tp2, "--lambda", "1001/1000", "--cone", "0"])
    assert code == 0 and not rep["nef"]
    code, rep, _ = run(["qtwist", tp2, "--lambda", "1"])
    assert code == 1 and rep["error"] == "malformed_input"
    code, rep, _ = run(["qtwist", tp2, "--lambda", "x/y", "--cone", "0"])
    assert code == 1


def test_qtwist_by_divisor(write):
    o1 = write("o1.json", divisor_to_json(hyperplane(P1)))
    delta = write("h.json", divisor_to_json(hyperplane(P1)))
    code, rep, _ = run(["qtwist", o1, "--lambda=-1/2", "--delta", delta])
    assert code == 0 and rep["walls"][0]["degrees"] == ["1/2"] and rep["ample"]


def test_mlgen_mult_normgen(write):
    L = write("L.json", polytope_to_json(dilate(E11, 2)))
    Lp = write("Lp.json", polytope_to_json(E11))
    code, rep, _ = run(["mlgen", "--L", L, "--Lprime", Lp])
    assert code == 0 and rep["nef"] and not rep["globally_generated"] and rep["oracle_agrees"]
    assert ["cone@(0,0,0)", [1, 1, 1]] in rep["witnesses"]
    code, rep, _ = run(["mlgen", "--L", L, "--Lprime", Lp, "--q", "0"])
    assert code == 1
    P = write("P.json", polytope_to_json(E12))
    P2x = write("P2.json", polytope_to_json(dilate(E12, 2)))
    code, rep, _ = run(["mult", "--P1", P, "--P2", P2x])
    assert code == 0 and rep == {"surjective": False, "witnesses": [[1, 1, 1, 1]]}
    code, rep, _ = run(["normgen", "--P", Lp])
    assert code == 0 and rep == {"normally_generated": False, "m_max": 2}


def test_stdin_and_json(monkeypatch, capsys):
    doc = json.dumps(bundle_to_json(tangent_bundle_of(P2)))
    monkeypatch.setattr(sys, "stdin", io.StringIO(doc))
    assert main(["--json", "sections", "--h0", "-"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["h0"] == 8


def test_errors_go_to_stderr(write, capsys):
    bad = write("bad.json", {"rank": 2})
    assert main(["fan", "validate", bad]) == 1
    cap = capsys.readouterr()
    assert "error" in cap.err and cap.out == ""
    assert main(["--json", "fan", "validate", bad]) == 1
    assert json.loads(capsys.readouterr().out)["error"] == "malformed_input"


def test_missing_file():
    code, rep, _ = run(["sections", "/nonexistent/file.json"])
    assert code == 1 and rep["error"] == "malformed_input"


def test_error_codes_are_distinct():
    from toripos import errors

    classes = [c for c in vars(errors).values() if isinstance(c, type) and issubclass(c, errors.ToriposError)]
    codes = [c.code for c in classes if c is not errors.ToriposError]
    assert len(codes) == len(set(codes))


def test_deterministic_output(tp2, capsys):
    outs = []
    for _ in range(2):
        main(["--json", "positivity", tp2])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


@pytest.mark.parametrize("name", corpus.names())
def test_corpus_entry(name):
    res = corpus.run_one(name)
    assert res["pass"], res


def test_corpus_cli():
    code, rep, _ = run(["corpus", "list"])
    assert code == 0 and "example-12" in rep["examples"]
    code, rep, _ = run(["corpus", "run", "example-12"])
    assert code == 0 and rep["pass"]
    assert rep["report"]["witnesses"][0] == ["cone@(0,0,0,0)", [1, 1, 1, 1]]


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "toripos.cli", "corpus", "list"], capture_output=True, text=True, check=True
    )
    assert "tangent-p2" in out.stdout
