import json
import os

import pytest

from matroid_mso import families as fam
from matroid_mso import setsystem as ss
from matroid_mso.cli import CLIError, main, parse_assignment, parse_params
from matroid_mso.logic import parse
from matroid_mso.setsystem import load, save, uniform


@pytest.fixture
def u13(tmp_path):
    p = tmp_path / "u13.json"
    save(uniform(1, 3), str(p))
    return str(p)


@pytest.fixture
def p2(tmp_path):
    p = tmp_path / "p2.json"
    save(fam.pn(2), str(p))
    return str(p)


def lines(capsys):
    return capsys.readouterr().out.strip().splitlines()


def test_parse_assignment():
    assert parse_assignment("X=0,2;Y=;Z=1") == {"X": 0b101, "Y": 0, "Z": 0b10}
    assert parse_assignment(None) == {}
    assert parse_assignment(" X = 1 ; ") == {"X": 0b10}
    with pytest.raises(CLIError):
        parse_assignment("X")
    with pytest.raises(CLIError):
        parse_assignment("X=1;X=2")
    with pytest.raises(CLIError):
        parse_assignment("X=a")


def test_parse_params():
    assert parse_params("n=3") == {"n": "3"}
    assert parse_params("r=3,chords=0,2,4") == {"r": "3", "chords": "0,2,4"}
    assert parse_params("") == {}
    with pytest.raises(CLIError):
        parse_params("3")


def test_eval_true_false(u13, capsys):
    assert main(["eval", "--structure", u13, "--formula", "(indep X)", "--assign", "X=1"]) == 0
    assert lines(capsys) == ["true"]
    assert main(["eval", "--structure", u13, "--formula", "(indep X)", "--assign", "X=0,1"]) == 1
    assert lines(capsys) == ["false"]


def test_eval_prelude_and_file(u13, tmp_path, capsys):
    f = tmp_path / "f.mso"
    f.write_text("(call Circuit X)\n")
    assert main(["eval", "--structure", u13, "--formula", str(f), "--assign", "X=0,2"]) == 0
    assert lines(capsys) == ["true"]
    assert main(["eval", "--no-prelude", "--structure", u13, "--formula", str(f), "--assign", "X=0,2"]) == 2


def test_eval_missing_assignment(u13, capsys):
    assert main(["eval", "--structure", u13, "--formula", "(indep X)"]) == 2
    assert "X" in capsys.readouterr().err


def test_eval_json_and_stats(u13, capsys):
    assert main(["eval", "--json", "--stats", "--structure", u13, "--formula", "(ex X (indep X))"]) == 0
    out, err = capsys.readouterr()
    rec = json.loads(out)
    assert rec == {"kind": "verdict", "value": True}
    stats = json.loads(err)
    assert stats["kind"] == "stats" and "steps" in stats


def test_errors_are_json_records(u13, capsys):
    assert main(["eval", "--json", "--structure", u13, "--formula", "(indep"]) == 2
    rec = json.loads(capsys.readouterr().out)
    assert rec["kind"] == "error"


def test_missing_file(capsys):
    assert main(["eval", "--structure", "/nonexistent.json", "--formula", "(matroid)"]) == 2


def test_budget(u13, capsys):
    f = "(all X (all Y (or (indep X) (indep Y) (sub Y X))))"
    assert main(["eval", "--budget", "3", "--structure", u13, "--formula", f]) == 2
    assert "exceeded 3 steps" in capsys.readouterr().err


def test_sat(u13, capsys):
    assert main(["sat", "--structure", u13, "--formula", "(call Basis B)"]) == 0
    out = lines(capsys)
    assert out[:-1] == ["B=0", "B=1", "B=2"]
    assert out[-1].startswith("3 ")
    assert main(["sat", "--structure", u13, "--formula", "(and (indep X) (sub X Y) (call Basis Y))",
                 "--vars", "Y,X", "--json"]) == 0
    recs = [json.loads(x) for x in lines(capsys)]
    assert recs[-1] == {"kind": "count", "value": 6}
    assert all(r["kind"] == "assignment" for r in recs[:-1])
    assert main(["sat", "--structure", u13, "--formula", "(and (indep X) (not (indep X)))"]) == 1


def test_transduce_dual(u13, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["transduce", "--structure", u13, "--transduction", "dual", "--out", str(out)]) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["transduction"] == "dual"
    assert len(man["outputs"]) == 1
    m = load(str(out / man["outputs"][0]["file"]))
    assert ss.is_isomorphic(m, uniform(2, 3))


def test_transduce_components(p2, tmp_path, capsys):
    out = tmp_path / "comp"
    assert main(["transduce", "--structure", p2, "--transduction", "components", "--out", str(out)]) == 0
    files = sorted(x for x in os.listdir(out) if x != "manifest.json")
    assert len(files) == 2
    for f in files:
        assert ss.is_isomorphic(load(str(out / f)), uniform(1, 2))


def test_transduce_empty_output(tmp_path, capsys):
    s = tmp_path / "nm.json"
    save(ss.SetSystem(2, [0, 0b11]), str(s))
    out = tmp_path / "none"
    assert main(["transduce", "--structure", str(s), "--transduction", "dual", "--out", str(out)]) == 0
    assert json.loads((out / "manifest.json").read_text())["outputs"] == []
    assert lines(capsys)[-1].startswith("0 ")


def test_transduce_json(u13, capsys):
    assert main(["transduce", "--json", "--structure", u13, "--transduction", "restrictions"]) == 0
    recs = [json.loads(x) for x in lines(capsys)]
    assert [r["kind"] for r in recs] == ["output"] * 8 + ["count"]


def test_lift_raw(capsys):
    assert main(["lift", "--formula", "(indep X)", "--transduction", "dual"]) == 0
    text = "\n".join(lines(capsys))
    assert "Coindep" in text or "coindep" in text.lower()


def test_lift_forall_is_sentence(capsys):
    assert main(["lift", "--json", "--formula", "(ex X (call Basis X))", "--transduction", "dual",
                 "--mode", "forall"]) == 0
    rec = json.loads(lines(capsys)[-1])
    assert rec["kind"] == "formula"
    assert rec["free"] == []


def test_lift_compact_is_shorter(capsys):
    f = "(ex X (and (indep X) (ex Y (and (sub Y X) (indep Y)))))"
    assert main(["lift", "--formula", f, "--transduction", "restrictions"]) == 0
    literal = capsys.readouterr().out
    assert main(["lift", "--compact", "--formula", f, "--transduction", "restrictions"]) == 0
    compact = capsys.readouterr().out
    assert len(compact) < len(literal)


def test_lift_emitted_text_reloads(capsys):
    assert main(["lift", "--formula", "(call Circuit X)", "--transduction", "dual"]) == 0
    text = capsys.readouterr().out
    from matroid_mso import stdlib
    f = parse(text, stdlib.prelude())
    assert f.free == {"X"}
    # forall mode wants a sentence
    assert main(["lift", "--formula", "(call Circuit X)", "--transduction", "dual", "--mode", "forall"]) == 2


def test_lift_rejects_card_through_simplification(capsys):
    assert main(["lift", "--formula", "(card X 0 2)", "--transduction", "simplification"]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_gen(tmp_path, capsys):
    out = tmp_path / "p3.json"
    assert main(["gen", "--family", "pn", "--params", "n=3", "--out", str(out)]) == 0
    m = load(str(out))
    assert m.n == 6
    assert ss.is_isomorphic(m, fam.pn(3))
    assert main(["gen", "--family", "spike", "--params", "r=3,chords=0,2,4"]) == 0
    assert main(["gen", "--family", "pn"]) == 2
    assert main(["gen", "--family", "nope", "--params", "n=3"]) == 2


def test_enumerate(tmp_path, capsys):
    out = tmp_path / "m3"
    assert main(["enumerate", "--n", "3", "--up-to-iso", "--out", str(out)]) == 0
    files = [x for x in os.listdir(out) if x != "manifest.json"]
    assert len(files) == 8
    man = json.loads((out / "manifest.json").read_text())
    assert man["count"] == 8
    ms = [load(str(out / f)) for f in files]
    assert len(ss.iso_dedup(ms)) == 8
    assert all(ss.is_matroid(m) for m in ms)


def test_enumerate_labeled(capsys):
    assert main(["enumerate", "--n", "2"]) == 0
    assert lines(capsys) == ["5 matroid(s) on 2 elements"]


def test_class_spike_oracle(tmp_path, capsys):
    s = tmp_path / "spike3.json"
    save(fam.spike(3), str(s))
    assert main(["class", "--name", "spike", "--structure", str(s), "--oracle"]) == 0
    assert lines(capsys) == ["true true MATCH"]


def test_class_pn_and_json(p2, capsys):
    assert main(["class", "--name", "pn", "--structure", p2]) == 0
    assert lines(capsys) == ["true"]
    assert main(["class", "--name", "pn", "--K", "3", "--structure", p2, "--json", "--oracle"]) == 0
    rec = json.loads(lines(capsys)[-1])
    assert rec == {"kind": "verdict", "value": False, "oracle": False, "match": True}


def test_class_unknown_name(p2, capsys):
    assert main(["class", "--name", "nope", "--structure", p2]) == 2


def test_class_needs_structure(capsys):
    assert main(["class", "--name", "pn"]) == 2


def test_class_emit(capsys):
    assert main(["class", "--name", "pn", "--emit"]) == 0
    text = capsys.readouterr().out
    from matroid_mso import stdlib
    assert not parse(text, stdlib.prelude()).free


def test_help_exit_code(capsys):
    assert main(["--help"]) == 0
    assert main([]) == 2
