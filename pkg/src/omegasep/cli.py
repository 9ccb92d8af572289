"""``omega-sep`` command line.

Every subcommand loads automata from JSON files, calls one library function
and prints its result (JSON for structured results).  Exit status: 0 on
success, 1 when a property fails (languages not disjoint, failed report),
2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

from .automata import BuchiAutomaton, CounterAutomaton, Kind, UPWord, validate
from .io import FormatError, dump_automaton, export_dot, from_dict, load_automaton, to_dict
from .monoid import MonoidTooLarge, linked_pairs, transition_monoid
from .omega import (certificate_from_dict, closure_automaton, intersect_omegaT, omega_is_empty, separator_omega,
                    up_membership)
from .profinite import NotDisjoint, TRegularProfinite, is_disjoint_T, is_empty, separator_T
from .regular import SizeLimitExceeded
from .words import cutoff, value

MODES = ("B", "S", "wB", "wS")


class UsageError(Exception):
    pass


def parse_word(text: str) -> tuple[str, ...]:
    """``aab`` is three letters; ``a,b,c`` splits on commas for longer symbols."""
    if "," in text:
        return tuple(x for x in text.split(",") if x)
    return tuple(text)


def _load(path: str, mode: str | None = None):
    try:
        a = load_automaton(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except FormatError as exc:
        raise UsageError(f"{path}: {exc}") from None
    problems = validate(a)
    if problems:
        raise UsageError(f"{path}: " + "; ".join(str(p) for p in problems))
    if mode is None or not isinstance(a, CounterAutomaton):
        return a
    want = Kind(mode)
    if want.is_omega != a.kind.is_omega:
        raise UsageError(f"{path}: a {a.kind} automaton cannot be read in mode {mode}")
    return a.with_kind(want)


def _counter(path: str, mode: str | None, omega: bool | None = None) -> CounterAutomaton:
    a = _load(path, mode)
    if not isinstance(a, CounterAutomaton):
        raise UsageError(f"{path}: expected a counter automaton")
    if omega is not None and a.kind.is_omega != omega:
        raise UsageError(f"{path}: expected {'an omega' if omega else 'a finite-word'} automaton, got {a.kind}")
    return a


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(args, doc) -> None:
    _emit(args, json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


def _emit_automaton(args, a) -> None:
    _emit(args, dump_automaton(a))
    if args.dot:
        Path(args.dot).write_text(export_dot(a), encoding="utf-8")


def _grid(text: str) -> tuple[int, int]:
    try:
        px, py = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected px,py") from None
    if px < 0 or py < 1:
        raise argparse.ArgumentTypeError("need px >= 0 and py >= 1")
    return px, py


# -- subcommands --------------------------------------------------------------

def cmd_value(args) -> int:
    a = _counter(args.automaton, args.mode, omega=False)
    v = value(a, parse_word(args.word))
    print("inf" if v == math.inf else v)
    return 0


def cmd_cutoff(args) -> int:
    a = _counter(args.automaton, args.mode, omega=False)
    _emit_automaton(args, cutoff(a, args.n))
    return 0


def cmd_monoid(args) -> int:
    a = _load(args.automaton, args.mode)
    m = transition_monoid(a)
    doc = {
        "size": len(m.elements),
        "elements": [{"index": i, "word": "".join(w), "pairs": sorted(map(list, m.pairs(i)))}
                     for i, w in enumerate(m.words)],
        "idempotents": m.idempotents(),
        "linked_pairs": [[t.s, t.e] for t in linked_pairs(m)],
    }
    _emit_json(args, doc)
    return 0


def cmd_empty(args) -> int:
    a = _counter(args.automaton, args.mode)
    res = omega_is_empty(a) if a.kind.is_omega else is_empty(TRegularProfinite(a))
    print(json.dumps(res))
    return 0


def cmd_disjoint(args) -> int:
    a1 = _counter(args.first, args.mode)
    a2 = _counter(args.second, args.mode)
    if a1.kind != a2.kind:
        raise UsageError(f"kinds differ: {a1.kind} and {a2.kind}")
    if a1.kind.is_omega:
        res = omega_is_empty(intersect_omegaT(a1, a2))
    else:
        res = is_disjoint_T(TRegularProfinite(a1), TRegularProfinite(a2))
    print(json.dumps(res))
    return 0 if res else 1


def cmd_separate_profinite(args) -> int:
    a1 = _counter(args.first, args.mode, omega=False)
    a2 = _counter(args.second, args.mode, omega=False)
    if a1.kind != a2.kind:
        raise UsageError(f"kinds differ: {a1.kind} and {a2.kind}")
    r, n0 = separator_T(TRegularProfinite(a1), TRegularProfinite(a2), a1.kind, a1.alphabet)
    if n0 is not None:
        print(f"n0 = {n0}", file=sys.stderr)
    _emit_automaton(args, r)
    return 0


def cmd_separate_omega(args) -> int:
    a1 = _counter(args.first, args.mode, omega=True)
    a2 = _counter(args.second, args.mode, omega=True)
    sep, cert = separator_omega(a1, a2)
    _emit_json(args, {"separator": to_dict(sep), "certificate": cert.to_dict()})
    if args.dot:
        Path(args.dot).write_text(export_dot(sep), encoding="utf-8")
    return 0


def cmd_closure(args) -> int:
    a = _counter(args.automaton, args.mode, omega=True)
    _emit_automaton(args, closure_automaton(a))
    return 0


def cmd_member(args) -> int:
    a = _counter(args.automaton, args.mode, omega=True)
    period = parse_word(args.period)
    if not period:
        raise UsageError("the period must be non-empty")
    u = UPWord(parse_word(args.prefix), period)
    print(json.dumps(up_membership(a, u, args.route)))
    return 0


def cmd_verify(args) -> int:
    from .harness import verify_separation

    a1 = _counter(args.first, args.mode, omega=True)
    a2 = _counter(args.second, args.mode, omega=True)
    try:
        doc = json.loads(Path(args.separator).read_text(encoding="utf-8"))
        sep = from_dict(doc["separator"])
        cert = certificate_from_dict(doc["certificate"], a1, a2) if "certificate" in doc else None
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{args.separator}: cannot read separator ({exc})") from None
    if not isinstance(sep, BuchiAutomaton):
        raise UsageError(f"{args.separator}: the separator must be a Büchi automaton")
    report = verify_separation(a1, a2, sep, cert, grid=args.grid)
    doc = report.to_dict(timings=not args.no_timings)
    doc["inputs"]["seed"] = args.seed
    _emit_json(args, doc)
    return 0 if report.ok else 1


def cmd_dot(args) -> int:
    a = _load(args.automaton, args.mode)
    _emit(args, export_dot(a, Path(args.automaton).stem))
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=MODES, help="read counter automata as this kind")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")
    common.add_argument("--dot", help="also write the resulting automaton as Graphviz DOT")
    common.add_argument("--seed", type=int, default=0, help="recorded in reports")
    common.add_argument("--grid", type=_grid, default=(3, 4), help="UP grid bounds px,py (default 3,4)")

    p = argparse.ArgumentParser(prog="omega-sep", description="Separators for omega-B and omega-S languages.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        s = sub.add_parser(name, parents=[common], help=help_text)
        s.set_defaults(fn=fn)
        return s

    s = add("value", cmd_value, "value of a finite word")
    s.add_argument("automaton")
    s.add_argument("word", help="letters, or comma-separated symbols")
    s = add("cutoff", cmd_cutoff, "NFA of the cutoff language for n")
    s.add_argument("automaton")
    s.add_argument("n", type=int)
    s = add("monoid", cmd_monoid, "transition monoid and linked pairs")
    s.add_argument("automaton")
    s = add("empty", cmd_empty, "emptiness of a profinite or omega language")
    s.add_argument("automaton")
    s = add("disjoint", cmd_disjoint, "disjointness of two languages of the same kind")
    s.add_argument("first")
    s.add_argument("second")
    s = add("separate-profinite", cmd_separate_profinite, "regular separator of two B or S languages")
    s.add_argument("first")
    s.add_argument("second")
    s = add("separate-omega", cmd_separate_omega, "Büchi separator with a certificate")
    s.add_argument("first")
    s.add_argument("second")
    s = add("closure", cmd_closure, "closure Büchi automaton of an omega-B automaton")
    s.add_argument("automaton")
    s = add("member", cmd_member, "membership of prefix.period^omega")
    s.add_argument("automaton")
    s.add_argument("--prefix", default="")
    s.add_argument("--period", required=True)
    s.add_argument("--route", choices=("reduction", "product", "closure"), default="reduction")
    s = add("verify", cmd_verify, "replay a separator file against both automata")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("separator")
    s.add_argument("--no-timings", action="store_true", help="omit wall times from the report")
    s = add("dot", cmd_dot, "Graphviz DOT rendering")
    s.add_argument("automaton")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except NotDisjoint as exc:
        witness = f" (witness {exc.witness})" if exc.witness is not None else ""
        print(f"omega-sep: not disjoint: {exc}{witness}", file=sys.stderr)
        return 1
    except (UsageError, FormatError) as exc:
        print(f"omega-sep: {exc}", file=sys.stderr)
        return 2
    except (MonoidTooLarge, SizeLimitExceeded) as exc:
        print(f"omega-sep: budget exceeded: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"omega-sep: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
