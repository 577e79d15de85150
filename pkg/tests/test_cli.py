import json

import pytest

from rtlcheck.cli import EX_DATA, EX_USAGE, main
from rtlcheck.corpus import read_text

CORPUS = "src/rtlcheck/corpus"


@pytest.fixture()
def corpus_paths(tmp_path):
    paths = {}
    for fname in ("example1.rsl", "example2.rsl", "example3.rsl", "mutex.ltl"):
        target = tmp_path / fname
        target.write_text(read_text(fname))
        paths[fname] = str(target)
    return paths


def test_verify_false_prints_and_exits_1(corpus_paths, capsys):
    code = main(["verify", corpus_paths["example1.rsl"],
                 "--props", corpus_paths["mutex.ltl"], "--prop", "mutex",
                 "--fair-all"])
    assert code == 1
    assert capsys.readouterr().out.strip() == "False"


def test_verify_true_exits_0(corpus_paths, capsys):
    code = main(["verify", corpus_paths["example2.rsl"],
                 "--props", corpus_paths["mutex.ltl"], "--prop", "mutex",
                 "--fair-all"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "True"


def test_verify_json(corpus_paths, capsys):
    code = main(["verify", corpus_paths["example3.rsl"],
                 "--props", corpus_paths["mutex.ltl"], "--prop", "nonstarve1",
                 "--fair-all", "--json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == {"property": "nonstarve1", "truth": "True"}


def test_witness_trace_output(corpus_paths, capsys):
    code = main(["witness", corpus_paths["example1.rsl"],
                 "--props", corpus_paths["mutex.ltl"], "--prop", "mutex",
                 "--fair-all"])
    assert code == 1
    out = capsys.readouterr().out
    lines = [l.strip() for l in out.strip().splitlines()]
    assert lines[0].startswith("False")
    assert lines[-1] == "ObsState U U"
    assert len([l for l in lines if l.startswith("ObsState")]) == 5


def test_witness_json_schema(corpus_paths, capsys):
    code = main(["witness", corpus_paths["example2.rsl"],
                 "--props", corpus_paths["mutex.ltl"], "--prop", "nonstarve1",
                 "--fair-all", "--json"])
    assert code == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["truth"] == "False"
    assert doc["validation"] == "Valid"
    assert doc["lasso"] == {"prefixLen": 2, "loopLen": 1}
    assert doc["trace"][0] == {"con": "ObsState", "args": [
        {"con": "T", "args": []}, {"con": "T", "args": []}]}


def test_check_exit_codes(corpus_paths, tmp_path, capsys):
    assert main(["check", corpus_paths["example3.rsl"]]) == 0
    bad = tmp_path / "bad.rsl"
    bad.write_text("data S = A\ncase f es of Cons e es -> Cons A (f es)")
    assert main(["check", str(bad)]) == 1
    assert "scrutinee" in capsys.readouterr().out


def test_lts_dot_and_json(corpus_paths, capsys):
    assert main(["lts", corpus_paths["example2.rsl"], "--dot"]) == 0
    dot = capsys.readouterr().out
    assert dot.startswith("digraph")
    assert main(["lts", corpus_paths["example2.rsl"], "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["nodes"]) == 6


def test_simulate(corpus_paths, capsys):
    code = main(["simulate", corpus_paths["example1.rsl"],
                 "--events", "Request1,Take1,Release1", "--cycle", "-n", "4"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines == ["ObsState T T", "ObsState W T", "ObsState U T",
                     "ObsState T T"]


def test_oracle_consistency(corpus_paths, capsys):
    code = main(["oracle", corpus_paths["example2.rsl"],
                 "--props", corpus_paths["mutex.ltl"], "--prop", "mutex",
                 "--fair-all", "--depth", "2", "--json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["truth"] == "True"
    assert doc["sampled"] == 36
    assert doc["contradiction"] is False


def test_fair_list_flag(corpus_paths, capsys):
    # fairness on process-1 moves alone still rules out its starvation
    code = main(["verify", corpus_paths["example1.rsl"],
                 "--props", corpus_paths["mutex.ltl"], "--prop", "nonstarve1",
                 "--fair", "Take1,Release1,Release2"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "True"


def test_fair_list_rejects_unknown_names(corpus_paths, capsys):
    code = main(["verify", corpus_paths["example1.rsl"],
                 "--props", corpus_paths["mutex.ltl"], "--prop", "nonstarve1",
                 "--fair", "NotAnEvent"])
    assert code == EX_DATA


def test_missing_file_exits_66(capsys):
    assert main(["check", "no/such/file.rsl"]) == EX_DATA


def test_malformed_file_exits_66(tmp_path, capsys):
    bad = tmp_path / "oops.rsl"
    bad.write_text("case x of C y y -> (")
    assert main(["check", str(bad)]) == EX_DATA


def test_internal_error_exits_70(corpus_paths, tmp_path, capsys):
    # parses fine but is not in simplified form: verify refuses, exit > 2
    bad = tmp_path / "unsimplified.rsl"
    bad.write_text(
        "data Event = Request1 | Request2 | Take1 | Take2 | Release1 | Release2\n"
        "data State = ObsState ProcState ProcState\n"
        "data ProcState = T | W | U\n"
        "case f es of Cons e es -> Cons (ObsState T T) (f es)")
    code = main(["verify", str(bad),
                 "--props", corpus_paths["mutex.ltl"], "--prop", "mutex"])
    assert code == 70
    assert "NotSimplified" in capsys.readouterr().err


def test_usage_error_exits_64(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify"])  # missing file and property flags
    assert exc.value.code == EX_USAGE


def test_unknown_property_exits_66(corpus_paths, capsys):
    code = main(["verify", corpus_paths["example1.rsl"],
                 "--props", corpus_paths["mutex.ltl"], "--prop", "nope"])
    assert code == EX_DATA
