import json

import pytest

from omegasep.cli import main, parse_word
from omegasep.fixtures import a_omega, cnt1, fig1, fig2, letter_counter, single_increment
from omegasep.io import dump_automaton, load_automaton
from omegasep.regular import nfa_member


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, a in [("fig1", fig1()), ("fig2", fig2()), ("cnt1", cnt1()), ("a_omega", a_omega()),
                    ("a1only", letter_counter("a")), ("b1only", letter_counter("b")),
                    ("single", single_increment())]:
        p = tmp_path / f"{name}.json"
        p.write_text(dump_automaton(a))
        out[name] = str(p)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_word():
    assert parse_word("aab") == ("a", "a", "b")
    assert parse_word("ab,cd") == ("ab", "cd")
    assert parse_word("") == ()


def test_value(capsys, files):
    assert run(capsys, "value", files["fig2"], "aab") == (0, "2\n", "")
    # one run per word, so B and S readings agree
    assert run(capsys, "value", "--mode", "B", files["fig2"], "aab")[1] == "2\n"
    assert run(capsys, "value", files["cnt1"], "aaa")[1] == "0\n"
    assert run(capsys, "value", files["cnt1"], "a,a,b")[1] == "2\n"


def test_value_of_word_without_runs(capsys, files):
    assert run(capsys, "value", "--mode", "B", files["a1only"], "b")[1] == "inf\n"


def test_cutoff_writes_an_nfa(capsys, files, tmp_path):
    out = tmp_path / "cut.json"
    code, _, _ = run(capsys, "cutoff", files["fig2"], "2", "-o", str(out))
    assert code == 0
    n = load_automaton(out.read_text())
    assert nfa_member(n, "aaa") and not nfa_member(n, "aab")


def test_monoid(capsys, files):
    code, out, _ = run(capsys, "monoid", files["fig1"])
    doc = json.loads(out)
    assert code == 0 and doc["size"] == 3
    assert [e["word"] for e in doc["elements"]] == ["", "b", "bb"]
    assert doc["idempotents"] == [0, 2]
    assert doc["linked_pairs"] == [[0, 0], [1, 0], [2, 0], [2, 2]]


def test_empty_and_disjoint(capsys, files):
    assert run(capsys, "empty", files["fig2"])[1] == "false\n"
    assert run(capsys, "empty", files["single"])[1] == "true\n"
    assert run(capsys, "empty", files["fig1"])[1] == "false\n"
    assert run(capsys, "disjoint", files["a1only"], files["b1only"]) == (0, "true\n", "")
    assert run(capsys, "disjoint", files["fig2"], files["a1only"])[:2] == (1, "false\n")
    assert run(capsys, "disjoint", files["fig1"], files["a_omega"])[:2] == (0, "true\n")


def test_separate_profinite(capsys, files):
    code, out, err = run(capsys, "separate-profinite", files["a1only"], files["b1only"])
    assert code == 0 and err == "n0 = 0\n"
    r = load_automaton(out)
    assert nfa_member(r, "aa") and not nfa_member(r, "b")


def test_separate_profinite_not_disjoint(capsys, files):
    code, _, err = run(capsys, "separate-profinite", files["fig2"], files["a1only"])
    assert code == 1 and "not disjoint" in err


def test_separate_verify_round_trip(capsys, files, tmp_path):
    sep = tmp_path / "sep.json"
    dot = tmp_path / "sep.dot"
    assert run(capsys, "separate-omega", files["fig1"], files["a_omega"], "-o", str(sep), "--dot", str(dot))[0] == 0
    assert dot.read_text().startswith("digraph")
    code, out, _ = run(capsys, "verify", files["fig1"], files["a_omega"], str(sep), "--grid", "2,2",
                       "--no-timings", "--seed", "7")
    doc = json.loads(out)
    assert code == 0 and doc["ok"] and doc["inputs"]["seed"] == 7 and doc["inputs"]["grid"] == [2, 2]
    assert all("seconds" not in c for c in doc["checks"])


def test_verify_detects_swapped_inputs(capsys, files, tmp_path):
    sep = tmp_path / "sep.json"
    run(capsys, "separate-omega", files["fig1"], files["a_omega"], "-o", str(sep))
    code, out, _ = run(capsys, "verify", files["a_omega"], files["fig1"], str(sep), "--grid", "1,1")
    assert code == 1 and json.loads(out)["checks"][0]["name"] == "certificate-hash"


def test_member_and_modes(capsys, files):
    assert run(capsys, "member", files["fig1"], "--period", "ab")[1] == "true\n"
    assert run(capsys, "member", "--mode", "wS", files["fig1"], "--period", "ab")[1] == "false\n"
    assert run(capsys, "member", files["fig1"], "--prefix", "b", "--period", "a", "--route", "closure")[1] == "false\n"


def test_closure_and_dot(capsys, files):
    code, out, _ = run(capsys, "closure", files["fig1"])
    assert code == 0 and load_automaton(out).acceptance
    code, out, _ = run(capsys, "dot", files["fig2"])
    assert out.startswith('digraph "fig2" {')


@pytest.mark.parametrize("argv", [
    ["value", "missing.json", "a"],
    ["bogus"],
    ["value", "--mode", "wB", "FIG2", "a"],
    ["member", "FIG1", "--period", ""],
    ["separate-omega", "FIG2", "FIG2"],
    ["value", "FIG2", "abc"],
])
def test_usage_errors_exit_2(capsys, files, argv):
    argv = [files["fig2"] if x == "FIG2" else files["fig1"] if x == "FIG1" else x for x in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "B"')
    code, _, err = run(capsys, "value", str(bad), "a")
    assert code == 2 and "bad.json" in err
