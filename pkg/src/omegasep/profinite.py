"""B- and S-regular languages of profinite words and their separators.

A B-automaton ``A`` denotes the union over ``n`` of the closures of
``{w : value_B(A, w) <= n}``; an S-automaton denotes the intersection over
``n`` of the closures of ``{w : value_S(A, w) > n}``.  Clopen sets are
closures of regular languages and are handled through their NFAs, so every
check in this module happens on finite words.

S-emptiness is decided with the effect abstraction of :mod:`effects`: the
denotation is non-empty exactly when the value function is unbounded on
accepted words, and unboundedness is detected by closing path summaries
under concatenation and under stabilisation of loops.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import networkx as nx

from . import effects as fx
from .automata import (NFA, AlphabetMismatch, CounterAutomaton, Kind, Op, Transition, Word, eps_paths,
                       pair_name, strip, trim)
from .regular import (SizeLimitExceeded, disjoint_union, nfa_complement, nfa_is_empty, shortest_word,
                      universal_nfa)
from .words import cutoff_S

CLOSURE_LIMIT = 200_000
N0_CEILING = 64


class NotDisjoint(Exception):
    """The two languages intersect; ``witness`` illustrates the overlap."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class TRegularProfinite:
    automaton: CounterAutomaton

    def __post_init__(self):
        if self.automaton.finals is None or self.automaton.kind.is_omega:
            raise ValueError("profinite languages are given by B- or S-automata")

    @property
    def kind(self) -> Kind:
        return self.automaton.kind

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.automaton.alphabet


Profinite = Union[TRegularProfinite, Sequence[TRegularProfinite]]


def parts_of(x: Profinite) -> list[TRegularProfinite]:
    """A language given as one automaton or as a union of parts."""
    if isinstance(x, TRegularProfinite):
        return [x]
    if hasattr(x, "parts"):
        return list(x.parts)
    return list(x)


# ---------------------------------------------------------------------------
# products

def counter_product(a1: CounterAutomaton, a2: CounterAutomaton | NFA, kind: Kind | None = None,
                    prefixes: tuple[str, str] = ("1.", "2.")) -> CounterAutomaton:
    """Synchronised product; counters of both sides are kept apart.

    Epsilon moves of either side run alone.  Final states (when both sides
    have them) are pairs of final states.
    """
    if set(a1.alphabet) != set(a2.alphabet):
        raise AlphabetMismatch("product of automata over different alphabets")
    c1, c2 = len(a1.counters), len(a2.counters)
    if c2:
        counters = tuple(prefixes[0] + c for c in a1.counters) + tuple(prefixes[1] + c for c in a2.counters)
    else:
        counters = a1.counters
    nil1, nil2 = (Op.NIL,) * c1, (Op.NIL,) * c2
    start = [(p, q) for p in sorted(a1.initial) for q in sorted(a2.initial)]
    names = {s: pair_name(*s) for s in start}
    queue = deque(start)
    trans = []

    def visit(src, dst, label, ops):
        if dst not in names:
            names[dst] = pair_name(*dst)
            queue.append(dst)
        trans.append(Transition(names[src], label, names[dst], ops))

    while queue:
        p, q = cur = queue.popleft()
        r1 = a1.moves[a1.index[p]]
        r2 = a2.moves[a2.index[q]]
        for d, ops in r1.get(None, ()):
            visit(cur, (a1.states[d], q), None, ops + nil2)
        for d, ops in r2.get(None, ()):
            visit(cur, (p, a2.states[d]), None, nil1 + ops)
        for a, moves in r1.items():
            if a is None:
                continue
            for d1, o1 in moves:
                for d2, o2 in r2.get(a, ()):
                    visit(cur, (a1.states[d1], a2.states[d2]), a, o1 + o2)
    f1, f2 = getattr(a1, "finals", None), getattr(a2, "finals", None)
    finals = None
    if f1 is not None and f2 is not None:
        finals = frozenset(v for (p, q), v in names.items() if p in f1 and q in f2)
    kind = kind or a1.kind
    if kind.is_omega:
        finals = None
    elif finals is None:
        raise ValueError("finite-word product needs final states on both sides")
    return CounterAutomaton(kind, a1.alphabet, tuple(names.values()) or ("*",),
                            frozenset(names[s] for s in start), counters, tuple(trans), finals)


def restrict_profinite(t: TRegularProfinite, n: NFA) -> TRegularProfinite:
    """The denotation of ``t`` intersected with the closure of ``L(n)``.

    ``n`` has no counters, so the plain product gives, word by word, the
    value of ``t`` on ``L(n)`` and the empty-run value elsewhere.
    """
    return TRegularProfinite(counter_product(t.automaton, n))


def intersect_T(t1: TRegularProfinite, t2: TRegularProfinite) -> TRegularProfinite:
    if t1.kind != t2.kind:
        raise ValueError(f"cannot intersect kinds {t1.kind} and {t2.kind}")
    return TRegularProfinite(counter_product(t1.automaton, t2.automaton))


def union_automaton(parts: Sequence[TRegularProfinite]) -> CounterAutomaton:
    """A single automaton for a union of parts of the same kind (counters
    of different parts are shared by position, padded with nil)."""
    if not parts:
        raise ValueError("union of no parts")
    kind = parts[0].kind
    width = max(len(p.automaton.counters) for p in parts)
    counters = tuple(f"c{i}" for i in range(width))
    states, trans, init, fin = [], [], set(), set()
    for k, p in enumerate(parts):
        a = p.automaton
        pad = (Op.NIL,) * (width - len(a.counters))
        ren = {q: pair_name(k, q) for q in a.states}
        states.extend(ren.values())
        init |= {ren[q] for q in a.initial}
        fin |= {ren[q] for q in a.finals}
        trans.extend(Transition(ren[t.src], t.label, ren[t.dst], t.ops + pad) for t in a.transitions)
    return CounterAutomaton(kind, parts[0].alphabet, tuple(states), frozenset(init), counters,
                            tuple(trans), frozenset(fin))


# ---------------------------------------------------------------------------
# emptiness

def is_empty_B(t: TRegularProfinite) -> bool:
    """Every accepted finite word has a finite value, so the denotation is
    empty exactly when no word is accepted."""
    return nfa_is_empty(strip(t.automaton))


def _triples(a: CounterAutomaton, limit: int, stop=None, members: set[int] | None = None):
    """Closure of single-transition summaries under composition and loop
    stabilisation, keeping only maximal effect vectors per state pair.

    ``members`` restricts the closure to transitions inside that state set
    (normally one strongly connected component).  ``stop(p, v, q)`` may end
    the search early by returning True.  Returns ``(table, stopped)`` where
    table maps (p, q) to a list of vectors.
    """
    n = len(a.states)
    table: dict[tuple[int, int], list] = {}
    out_of: dict[int, set[int]] = {}
    into: dict[int, set[int]] = {}
    work: deque = deque()
    total = 0

    def add(p: int, v, q: int) -> bool:
        nonlocal total
        cur = table.setdefault((p, q), [])
        for w in cur:
            if fx.vleq(v, w):
                return False
        cur[:] = [w for w in cur if not fx.vleq(w, v)]
        cur.append(v)
        out_of.setdefault(p, set()).add(q)
        into.setdefault(q, set()).add(p)
        total += 1
        if total > limit:
            raise SizeLimitExceeded(f"effect closure exceeds {limit} summaries")
        work.append((p, v, q))
        return bool(stop and stop(p, v, q))

    sources = range(n) if members is None else members
    for i in sources:
        for moves in a.moves[i].values():
            for d, ops in moves:
                if members is not None and d not in members:
                    continue
                if add(i, fx.of_ops(ops), d):
                    return table, True
    while work:
        p, v, q = work.popleft()
        if v not in table.get((p, q), ()):
            continue  # superseded by a larger vector
        if p == q:
            if add(p, fx.vsharp(fx.vcompose(v, v)), p):
                return table, True
        for r in list(out_of.get(q, ())):
            for w in list(table.get((q, r), ())):
                if add(p, fx.vcompose(v, w), r):
                    return table, True
        for o in list(into.get(p, ())):
            for w in list(table.get((o, p), ())):
                if add(o, fx.vcompose(w, v), q):
                    return table, True
    return table, False


def _components(a: CounterAutomaton) -> list[list[int]]:
    """Strongly connected components of the state graph (epsilon moves
    included), in topological order."""
    g = nx.DiGraph()
    g.add_nodes_from(range(len(a.states)))
    for i, row in enumerate(a.moves):
        for moves in row.values():
            for d, _ in moves:
                g.add_edge(i, d)
    cond = nx.condensation(g)
    return [sorted(cond.nodes[c]["members"]) for c in nx.topological_sort(cond)]


def _insert(antichain: list, v) -> bool:
    for w in antichain:
        if fx.vleq(v, w):
            return False
    antichain[:] = [w for w in antichain if not fx.vleq(w, v)]
    antichain.append(v)
    return True


def reachable_effects(a: CounterAutomaton, limit: int = 200_000) -> dict[int, list]:
    """Per state: maximal effect vectors of paths from an initial state,
    with loops stabilised.  Computed per strongly connected component in
    topological order."""
    reach: dict[int, list] = {}
    width = len(a.counters)
    for q in a.initial:
        reach.setdefault(a.index[q], []).append(fx.unit(width))
    for comp in _components(a):
        members = set(comp)
        if not any(q in reach for q in comp):
            continue
        inner_edges = any(d in members for q in comp for moves in a.moves[q].values() for d, _ in moves)
        if inner_edges:
            table, _ = _triples(a, limit, members=members)
            entry = {q: list(reach.get(q, ())) for q in comp}
            for (p, q), vs in table.items():
                for u in entry[p]:
                    for v in vs:
                        _insert(reach.setdefault(q, []), fx.vcompose(u, v))
        for q in comp:
            for moves in a.moves[q].values():
                for d, ops in moves:
                    if d in members:
                        continue
                    eff = fx.of_ops(ops)
                    for u in reach.get(q, ()):
                        _insert(reach.setdefault(d, []), fx.vcompose(u, eff))
    return reach


def is_empty_S(t: TRegularProfinite | CounterAutomaton, limit: int = CLOSURE_LIMIT) -> bool:
    """True iff the S-automaton's values are bounded on accepted words."""
    a = t.automaton if isinstance(t, TRegularProfinite) else t
    if a.kind.is_b or a.finals is None:
        raise ValueError("is_empty_S needs an S-automaton")
    a = trim(a)
    if not a.initial or not a.finals:
        return True
    if a.initial & a.finals:
        return False  # the empty run has no reset, so the empty word has value inf
    reach = reachable_effects(a, limit)
    return not any(fx.good_final(v) for q in a.finals for v in reach.get(a.index[q], ()))


def good_loop_exists(a: CounterAutomaton, limit: int = CLOSURE_LIMIT) -> bool:
    """Some reachable loop can be iterated forever with every counter reset
    and its reset values growing without bound."""
    keep = a.reachable()
    for comp in _components(a):
        if a.states[comp[0]] not in keep:
            continue
        _, found = _triples(a, limit, lambda p, v, q: p == q and fx.good_loop(v), members=set(comp))
        if found:
            return True
    return False


def is_empty(t: TRegularProfinite) -> bool:
    return is_empty_B(t) if t.kind.is_b else is_empty_S(t)


def is_empty_union(x: Profinite) -> bool:
    return all(is_empty(p) for p in parts_of(x))


# ---------------------------------------------------------------------------
# the matrix formulation (literal, exponential; used to cross-check)

EffectMatrix = frozenset  # of (p, q, vector) entries, maximal vectors only


def _normal(entries) -> EffectMatrix:
    cells: dict[tuple[int, int], list] = {}
    for p, q, v in entries:
        _insert(cells.setdefault((p, q), []), v)
    return frozenset((p, q, v) for (p, q), vs in cells.items() for v in vs)


def _mat_mul(m1: EffectMatrix, m2: EffectMatrix) -> EffectMatrix:
    by_src: dict[int, list] = {}
    for q, r, v in m2:
        by_src.setdefault(q, []).append((r, v))
    return _normal((p, r, fx.vcompose(u, v)) for p, q, u in m1 for r, v in by_src.get(q, ()))


def _mat_sharp(m: EffectMatrix) -> EffectMatrix:
    extra = set(m)
    loops = [(q, f) for q, q2, f in m if q == q2 and fx.vcompose(f, f) == f]
    by_dst: dict[int, list] = {}
    by_src: dict[int, list] = {}
    for p, q, v in m:
        by_dst.setdefault(q, []).append((p, v))
        by_src.setdefault(p, []).append((q, v))
    for q, f in loops:
        fs = fx.vsharp(f)
        for p, u in by_dst.get(q, ()):
            left = fx.vcompose(u, fs)
            for r, w in by_src.get(q, ()):
                extra.add((p, r, fx.vcompose(left, w)))
    return _normal(extra)


def letter_matrices(a: CounterAutomaton) -> dict[str, EffectMatrix]:
    """Per letter: effects of every path ``eps* a eps*``."""
    out = {}
    for sym in a.alphabet:
        entries = set()
        for i in range(len(a.states)):
            for j, pre in eps_paths(a, i):
                for k, ops in a.moves[j].get(sym, ()):
                    for m, post in eps_paths(a, k):
                        v = tuple(fx.OP_EFFECT[Op.NIL] for _ in a.counters)
                        for o in pre + [ops] + post:
                            v = fx.vcompose(v, fx.of_ops(o))
                        entries.add((i, m, v))
        out[sym] = _normal(entries)
    return out


def stabilization_closure(t: TRegularProfinite | CounterAutomaton, limit: int = 5000) -> set[EffectMatrix]:
    """Least set of effect matrices containing the letter matrices and
    closed under product and stabilisation of idempotents."""
    a = t.automaton if isinstance(t, TRegularProfinite) else t
    # every element is a product of generators; sharps join the generators
    gens = list(dict.fromkeys(letter_matrices(a).values()))
    seen = set(gens)
    work = deque(gens)

    def push(c: EffectMatrix) -> None:
        if c not in seen:
            if len(seen) >= limit:
                raise SizeLimitExceeded(f"stabilization closure exceeds {limit} matrices")
            seen.add(c)
            work.append(c)

    while work:
        m = work.popleft()
        for g in list(gens):
            push(_mat_mul(m, g))
        if _mat_mul(m, m) == m:
            s = _mat_sharp(m)
            if s not in gens:
                gens.append(s)
                push(s)
                for x in list(seen):
                    push(_mat_mul(x, s))
    return seen


def is_empty_S_matrix(t: TRegularProfinite | CounterAutomaton, limit: int = 5000) -> bool:
    """Emptiness read off :func:`stabilization_closure`."""
    a = t.automaton if isinstance(t, TRegularProfinite) else t
    if a.initial & a.finals:
        return False
    # the empty word may also reach a final state through epsilon moves only
    for q in a.initial:
        for j, path in eps_paths(a, a.index[q]):
            if a.states[j] in a.finals:
                v = tuple(0 for _ in a.counters)
                for o in path:
                    v = fx.vcompose(v, fx.of_ops(o))
                if fx.good_final(v):
                    return False
    init = {a.index[q] for q in a.initial}
    fin = {a.index[q] for q in a.finals}
    for m in stabilization_closure(a, limit):
        for p, q, v in m:
            if p in init and q in fin and fx.good_final(v):
                return False
    return True


# ---------------------------------------------------------------------------
# disjointness and separators

def _overlap(p1: TRegularProfinite, p2: TRegularProfinite) -> TRegularProfinite | None:
    prod = intersect_T(p1, p2)
    return None if is_empty(prod) else prod


def _witness(prod: TRegularProfinite) -> Word | None:
    if prod.kind.is_b:
        return shortest_word(strip(prod.automaton))
    return shortest_word(cutoff_S(prod.automaton, 1))


def is_disjoint_T(t1: Profinite, t2: Profinite) -> bool:
    return all(_overlap(p1, p2) is None for p1 in parts_of(t1) for p2 in parts_of(t2))


def _require_disjoint(m1: Profinite, m2: Profinite) -> None:
    for p1 in parts_of(m1):
        for p2 in parts_of(m2):
            if p1.kind != p2.kind:
                raise ValueError(f"cannot compare kinds {p1.kind} and {p2.kind}")
            prod = _overlap(p1, p2)
            if prod is not None:
                w = _witness(prod)
                raise NotDisjoint("the two profinite languages intersect", w)


def separator_B(m1: Profinite, m2: Profinite, alphabet: Sequence[str] | None = None) -> NFA:
    """Counter-free NFA ``K`` with ``M1`` inside the closure of ``K`` and
    ``M2`` outside it: ``K`` is ``M1`` with its counters removed."""
    _require_disjoint(m1, m2)
    parts = parts_of(m1)
    if not parts:
        if alphabet is None:
            raise ValueError("an empty union needs an explicit alphabet")
        from .regular import empty_nfa

        return empty_nfa(alphabet)
    stripped = [strip(p.automaton) for p in parts]
    return stripped[0] if len(stripped) == 1 else disjoint_union(stripped)


def _least_cutoff(p1: TRegularProfinite, p2: TRegularProfinite, ceiling: int) -> int:
    for n in range(ceiling + 1):
        if is_empty_S(restrict_profinite(p1, cutoff_S(p2.automaton, n))):
            return n
    raise RuntimeError(f"no cutoff up to {ceiling} separates the languages; raise the ceiling")


def separator_S(m1: Profinite, m2: Profinite, alphabet: Sequence[str] | None = None,
                ceiling: int = N0_CEILING) -> tuple[NFA, int]:
    """``(R, n0)``: ``R`` is the complement of ``{w : value_S(M2, w) > n0}``
    for the least ``n0`` at which ``M1`` misses the closure of that set."""
    _require_disjoint(m1, m2)
    parts1, parts2 = parts_of(m1), parts_of(m2)
    if alphabet is None:
        alphabet = (parts1 or parts2)[0].alphabet
    if not parts2:
        return universal_nfa(alphabet), 0
    n0 = max((_least_cutoff(p1, p2, ceiling) for p1 in parts1 for p2 in parts2), default=0)
    cuts = [cutoff_S(p2.automaton, n0) for p2 in parts2]
    cut = cuts[0] if len(cuts) == 1 else disjoint_union(cuts)
    return nfa_complement(cut), n0


def separator_T(m1: Profinite, m2: Profinite, kind: Kind, alphabet: Sequence[str]) -> tuple[NFA, int | None]:
    if Kind(kind).is_b:
        return separator_B(m1, m2, alphabet), None
    return separator_S(m1, m2, alphabet)
