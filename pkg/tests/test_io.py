import json

import pytest
from hypothesis import given

from omegasep.automata import NFA, Transition
from omegasep.fixtures import catalog, fig1, fig2, inf_a_reference
from omegasep.io import FormatError, dump_automaton, edge_label, export_dot, from_dict, load_automaton, to_dict

from conftest import AB, counter_automata


def test_round_trip_fixtures():
    for f in catalog().values():
        assert load_automaton(dump_automaton(f.automaton)) == f.automaton, f.name


@given(counter_automata("S", max_states=4))
def test_round_trip_random_finite(a):
    assert load_automaton(dump_automaton(a)) == a


@given(counter_automata("wB", max_states=4))
def test_round_trip_random_omega(a):
    assert load_automaton(dump_automaton(a)) == a


def test_round_trip_nfa_and_buchi():
    n = NFA(AB, ("p", "q"), {"p"}, {"q"}, (Transition("p", "a", "q"), Transition("q", None, "p")))
    b = inf_a_reference()
    assert load_automaton(dump_automaton(n)) == n
    assert load_automaton(dump_automaton(b)) == b


def test_dump_is_stable_text():
    text = dump_automaton(fig1())
    assert text == dump_automaton(load_automaton(text))
    doc = json.loads(text)
    assert doc["kind"] == "wB" and "finals" not in doc
    assert doc["transitions"][1] == {"from": "qI", "label": "b", "ops": {"c": "nil"}, "to": "qI"}


def _doc():
    return to_dict(fig2())


def test_missing_counter_in_ops_names_it():
    doc = _doc()
    doc["transitions"][0]["ops"] = {}
    with pytest.raises(FormatError, match="'c'"):
        from_dict(doc)


def test_unknown_counter_in_ops_names_it():
    doc = _doc()
    doc["transitions"][0]["ops"]["ghost"] = "inc"
    with pytest.raises(FormatError, match="ghost"):
        from_dict(doc)


def test_invalid_operation():
    doc = _doc()
    doc["transitions"][0]["ops"]["c"] = "double"
    with pytest.raises(FormatError, match="double"):
        from_dict(doc)


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(kind="weird"),
    lambda d: d.pop("alphabet"),
    lambda d: d.update(states="qI"),
    lambda d: d.update(transitions={}),
    lambda d: d["transitions"][0].pop("to"),
    lambda d: d["transitions"][0].update(label=3),
    lambda d: d.update(finals=None) or d.pop("finals"),
])
def test_structural_errors(mutate):
    doc = _doc()
    mutate(doc)
    with pytest.raises(FormatError):
        from_dict(doc)


def test_omega_kind_rejects_finals():
    doc = to_dict(fig1())
    doc["finals"] = ["qI"]
    with pytest.raises(FormatError):
        from_dict(doc)


def test_json_syntax_error_has_position():
    with pytest.raises(FormatError) as exc:
        load_automaton('{"kind": "B",\n  "alphabet": [,]}')
    assert exc.value.line == 2 and exc.value.column is not None


def test_edge_labels():
    a = fig2()
    labels = [edge_label(a, t) for t in a.transitions]
    assert labels == ["a / c:inc", "b", "ε / c:reset"]


def test_dot_export_golden():
    dot = export_dot(fig2(), "fig2")
    assert dot == (
        'digraph "fig2" {\n'
        '  rankdir=LR;\n'
        '  node [shape=circle];\n'
        '  "qI";\n'
        '  "qF" [shape=doublecircle];\n'
        '  __start0 [shape=point];\n'
        '  __start0 -> "qI";\n'
        '  "qI" -> "qI" [label="a / c:inc"];\n'
        '  "qI" -> "qI" [label="b"];\n'
        '  "qI" -> "qF" [label="ε / c:reset"];\n'
        '}\n'
    )


def test_dot_marks_buchi_acceptance():
    dot = export_dot(inf_a_reference())
    assert '"sa" [shape=doublecircle]' in dot and '  "sb";' in dot
