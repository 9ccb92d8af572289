"""JSON load/dump and Graphviz DOT export for all automaton classes."""
from __future__ import annotations

import json
from typing import Any

from .automata import NFA, Automaton, BuchiAutomaton, CounterAutomaton, Kind, Op, Transition


class FormatError(ValueError):
    """Malformed automaton document.  ``line``/``column`` are set for JSON
    syntax errors; ``path`` names the offending field otherwise."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None, path: str = ""):
        where = f" at line {line}, column {column}" if line is not None else ""
        where += f" in {path}" if path else ""
        super().__init__(message + where)
        self.line, self.column, self.path = line, column, path


KINDS = ("B", "S", "wB", "wS", "nfa", "buchi")


def _strings(doc: dict, key: str, required: bool = True) -> list[str] | None:
    if key not in doc:
        if required:
            raise FormatError(f"missing field {key!r}", path=key)
        return None
    val = doc[key]
    if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
        raise FormatError(f"field {key!r} must be a list of strings", path=key)
    return val


def from_dict(doc: Any) -> Automaton:
    if not isinstance(doc, dict):
        raise FormatError("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise FormatError(f"unknown kind tag {kind!r}; expected one of {', '.join(KINDS)}", path="kind")
    alphabet = _strings(doc, "alphabet")
    states = _strings(doc, "states")
    initial = _strings(doc, "initial")
    counted = kind in ("B", "S", "wB", "wS")
    counters = _strings(doc, "counters", required=counted) or []
    if not counted and counters:
        raise FormatError(f"kind {kind!r} has no counters", path="counters")
    raw = doc.get("transitions")
    if not isinstance(raw, list):
        raise FormatError("field 'transitions' must be a list", path="transitions")
    trans = []
    for i, t in enumerate(raw):
        path = f"transitions[{i}]"
        if not isinstance(t, dict):
            raise FormatError("transition must be an object", path=path)
        for key in ("from", "to"):
            if not isinstance(t.get(key), str):
                raise FormatError(f"field {key!r} must be a state name", path=path)
        label = t.get("label")
        if label is not None and not isinstance(label, str):
            raise FormatError("label must be a string or null", path=path)
        ops_map = t.get("ops", {})
        if not isinstance(ops_map, dict):
            raise FormatError("ops must be an object", path=path)
        for c in ops_map:
            if c not in counters:
                raise FormatError(f"ops names unknown counter {c!r}", path=path)
        ops = []
        for c in counters:
            if c not in ops_map:
                raise FormatError(f"ops is missing counter {c!r}", path=path)
            try:
                ops.append(Op(ops_map[c]))
            except ValueError:
                raise FormatError(f"counter {c!r} has invalid operation {ops_map[c]!r}", path=path) from None
        trans.append(Transition(t["from"], label, t["to"], tuple(ops)))

    if kind in ("B", "S", "wB", "wS"):
        finals = _strings(doc, "finals", required=kind in ("B", "S"))
        if kind in ("wB", "wS") and finals is not None:
            raise FormatError(f"kind {kind!r} must not have final states", path="finals")
        return CounterAutomaton(Kind(kind), alphabet, states, initial, counters, trans,
                                None if finals is None else frozenset(finals))
    if kind == "nfa":
        return NFA(alphabet, states, initial, _strings(doc, "finals"), trans)
    acc = doc.get("acceptance")
    if not isinstance(acc, list) or not all(isinstance(s, list) for s in acc):
        raise FormatError("field 'acceptance' must be a list of lists", path="acceptance")
    return BuchiAutomaton(alphabet, states, initial, trans, tuple(frozenset(s) for s in acc))


def load_automaton(text: str) -> Automaton:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno, exc.colno) from None
    return from_dict(doc)


def _ordered(a: Automaton, subset) -> list[str]:
    return [q for q in a.states if q in subset]


def to_dict(a: Automaton) -> dict:
    if isinstance(a, CounterAutomaton):
        kind = str(a.kind)
    elif isinstance(a, NFA):
        kind = "nfa"
    else:
        kind = "buchi"
    doc: dict[str, Any] = {"kind": kind, "alphabet": list(a.alphabet), "states": list(a.states),
                           "initial": _ordered(a, a.initial)}
    if isinstance(a, CounterAutomaton):
        doc["counters"] = list(a.counters)
    finals = getattr(a, "finals", None)
    if finals is not None:
        doc["finals"] = _ordered(a, finals)
    if isinstance(a, BuchiAutomaton):
        doc["acceptance"] = [_ordered(a, s) for s in a.acceptance]
    doc["transitions"] = [
        {"from": t.src, "label": t.label, "ops": {c: str(o) for c, o in zip(a.counters, t.ops)}, "to": t.dst}
        for t in a.transitions
    ]
    return doc


def dump_automaton(a: Automaton) -> str:
    return json.dumps(to_dict(a), indent=2, ensure_ascii=False) + "\n"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def edge_label(a: Automaton, t: Transition) -> str:
    label = "ε" if t.label is None else t.label
    ops = [f"{c}:{o}" for c, o in zip(a.counters, t.ops) if o is not Op.NIL]
    return label + (" / " + ", ".join(ops) if ops else "")


def export_dot(a: Automaton, name: str = "automaton") -> str:
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;", '  node [shape=circle];']
    accepting: dict[str, list[int]] = {}
    if isinstance(a, BuchiAutomaton):
        for i, s in enumerate(a.acceptance):
            for q in s:
                accepting.setdefault(q, []).append(i)
    for q in a.states:
        attrs = []
        if getattr(a, "finals", None) and q in a.finals:
            attrs.append("shape=doublecircle")
        if q in accepting:
            attrs.append("shape=doublecircle")
            if len(a.acceptance) > 1:
                attrs.append(f"xlabel={_quote('F' + ','.join(map(str, accepting[q])))}")
        lines.append(f"  {_quote(q)}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for k, q in enumerate(a.states):
        if q in a.initial:
            lines.append(f"  __start{k} [shape=point];")
            lines.append(f"  __start{k} -> {_quote(q)};")
    for t in a.transitions:
        lines.append(f"  {_quote(t.src)} -> {_quote(t.dst)} [label={_quote(edge_label(a, t))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
