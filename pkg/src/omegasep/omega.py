"""Omega-level algorithms.

Büchi automata here are generalised (a run must visit every accepting set
infinitely often) and have no epsilon moves.  Omega-B/omega-S automata are
:class:`CounterAutomaton` values of kind ``wB``/``wS``.

Separator construction.  For every coherent pair ``(t1, t2)`` of types of
the two transition monoids, the profinite languages ``M1 = M_t1(A1)`` and
``M2 = M_t2(A2)`` are disjoint, and a regular ``R`` separating them is
computed.  ``S_{t1,t2}`` holds the omega-words with a decomposition
``w0 w1 w2 ...`` of type ``t1`` under ``h1`` and ``t2`` under ``h2`` such
that, from some block ``N`` on, every concatenation ``w_i ... w_{j-1}``
with ``N <= i < j`` lies in ``R``.  This is the same as asking that every
grouping lies in ``R`` from some point on: if some interval ``[i, j)``
beyond every ``N`` leaves ``R``, picking infinitely many such intervals
greedily and grouping each into one block gives a grouping that leaves
``R`` infinitely often, and the converse is immediate.  The automaton
guesses the cuts, tracks the block images in both monoids, guesses ``N``
and then keeps the set of ``R``-states reached from every cut since ``N``;
at each cut this whole set must be accepting.  The separator is the union
of all ``S_{t1,t2}``.
"""
from __future__ import annotations

import hashlib
import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import networkx as nx

from . import effects as fx
from .automata import (NFA, AlphabetMismatch, BuchiAutomaton, CounterAutomaton, Kind, Op, Transition, UPWord,
                       Word, eps_paths, pair_name, product_safety, restrict_states, up_safety)
from .io import dump_automaton, to_dict
from .monoid import (CoherentWitness, LinkedPair, MonoidTooLarge, TransitionMonoid, coherent_pairs,
                     linked_pairs, transition_monoid, up_decomposition)
from .profinite import (NotDisjoint, TRegularProfinite, counter_product, good_loop_exists, is_empty,
                        separator_B, separator_S)
from .reduction import build_M_t, check_linked, degenerate, _loop_automaton, all_taus
from .regular import minimize_dfa, nfa_complement, universal_nfa, word_nfa

TYPES_MONOID_LIMIT = 512


def _need_omega(a: CounterAutomaton, kind: Kind | None = None) -> None:
    if not isinstance(a, CounterAutomaton) or not a.kind.is_omega:
        raise ValueError("expected an omega-B or omega-S automaton")
    if kind is not None and a.kind is not kind:
        raise ValueError(f"expected kind {kind}, got {a.kind}")


# ---------------------------------------------------------------------------
# Büchi automata

def buchi_is_empty(b: BuchiAutomaton) -> bool:
    """No reachable cycle meets every accepting set."""
    g = nx.DiGraph()
    g.add_nodes_from(b.states)
    g.add_edges_from((t.src, t.dst) for t in b.transitions)
    reach = set()
    for q in b.initial:
        reach |= nx.descendants(g, q) | {q}
    sub = g.subgraph(reach)
    for comp in nx.strongly_connected_components(sub):
        if len(comp) == 1:
            (q,) = comp
            if not sub.has_edge(q, q):
                continue
        if all(comp & acc for acc in b.acceptance):
            return False
    return True


def buchi_intersect(b1: BuchiAutomaton, b2: BuchiAutomaton) -> BuchiAutomaton:
    if set(b1.alphabet) != set(b2.alphabet):
        raise AlphabetMismatch("product of automata over different alphabets")
    start = [(p, q) for p in sorted(b1.initial) for q in sorted(b2.initial)]
    names = {s: pair_name(*s) for s in start}
    queue = deque(start)
    trans = []
    while queue:
        p, q = cur = queue.popleft()
        r2 = b2.moves[b2.index[q]]
        for a, moves in b1.moves[b1.index[p]].items():
            for d1, _ in moves:
                for d2, _ in r2.get(a, ()):
                    nxt = (b1.states[d1], b2.states[d2])
                    if nxt not in names:
                        names[nxt] = pair_name(*nxt)
                        queue.append(nxt)
                    trans.append(Transition(names[cur], a, names[nxt]))
    acc = [frozenset(v for (p, _), v in names.items() if p in s) for s in b1.acceptance]
    acc += [frozenset(v for (_, q), v in names.items() if q in s) for s in b2.acceptance]
    return BuchiAutomaton(b1.alphabet, tuple(names.values()) or ("*",),
                          frozenset(names[s] for s in start), tuple(trans), tuple(acc))


def buchi_up_membership(b: BuchiAutomaton, u: UPWord) -> bool:
    return not buchi_is_empty(buchi_intersect(b, up_safety(u, b.alphabet)))


def empty_buchi(alphabet: Sequence[str]) -> BuchiAutomaton:
    return BuchiAutomaton(tuple(alphabet), ("0",), frozenset(), (), (frozenset({"0"}),))


def buchi_union_all(parts: Sequence[BuchiAutomaton], alphabet: Sequence[str] | None = None) -> BuchiAutomaton:
    """Disjoint union.  Accepting set ``i`` of the union is the ``i``-th set
    of each component, or all its states if it has fewer sets."""
    if not parts:
        if alphabet is None:
            raise ValueError("an empty union needs an explicit alphabet")
        return empty_buchi(alphabet)
    for p in parts[1:]:
        if set(p.alphabet) != set(parts[0].alphabet):
            raise AlphabetMismatch("union of automata over different alphabets")
    width = max(len(p.acceptance) for p in parts)
    states, trans, init = [], [], set()
    acc = [set() for _ in range(width)]
    for k, b in enumerate(parts):
        ren = {q: pair_name(k, q) for q in b.states}
        states.extend(ren.values())
        init |= {ren[q] for q in b.initial}
        trans.extend(Transition(ren[t.src], t.label, ren[t.dst]) for t in b.transitions)
        for i in range(width):
            src = b.acceptance[i] if i < len(b.acceptance) else b.states
            acc[i] |= {ren[q] for q in src}
    return BuchiAutomaton(parts[0].alphabet, tuple(states), frozenset(init), tuple(trans),
                          tuple(frozenset(s) for s in acc))


def buchi_union(b1: BuchiAutomaton, b2: BuchiAutomaton) -> BuchiAutomaton:
    return buchi_union_all([b1, b2])


def degeneralize(b: BuchiAutomaton) -> BuchiAutomaton:
    """Equivalent automaton with a single accepting set (round-robin index)."""
    k = len(b.acceptance)
    if k == 1:
        return b
    if k == 0:
        raise ValueError("a Büchi automaton needs at least one accepting set")
    start = [(q, 0) for q in sorted(b.initial)]
    names = {s: pair_name(*s) for s in start}
    queue = deque(start)
    trans = []
    while queue:
        q, i = cur = queue.popleft()
        j = (i + 1) % k if q in b.acceptance[i] else i
        for a, moves in b.moves[b.index[q]].items():
            for d, _ in moves:
                nxt = (b.states[d], j)
                if nxt not in names:
                    names[nxt] = pair_name(*nxt)
                    queue.append(nxt)
                trans.append(Transition(names[cur], a, names[nxt]))
    acc = frozenset(v for (q, i), v in names.items() if i == 0 and q in b.acceptance[0])
    return BuchiAutomaton(b.alphabet, tuple(names.values()) or ("*",), frozenset(names[s] for s in start),
                          tuple(trans), (acc,))


def buchi_to_omegaT(b: BuchiAutomaton, kind: Kind | str) -> CounterAutomaton:
    """The same language as an omega-B or omega-S automaton with one counter.

    omega-B: the counter is never incremented and is reset on every
    transition entering the accepting set.  omega-S: every transition
    increments it, and each transition entering the accepting set also
    exists in a resetting copy, so resets can be spaced out arbitrarily.
    """
    kind = Kind(kind)
    if not kind.is_omega:
        raise ValueError("target kind must be wB or wS")
    d = degeneralize(b)
    acc = d.acceptance[0]
    trans = []
    for t in d.transitions:
        enters = t.dst in acc
        if kind is Kind.WB:
            trans.append(Transition(t.src, t.label, t.dst, (Op.RESET if enters else Op.NIL,)))
        else:
            trans.append(Transition(t.src, t.label, t.dst, (Op.INC,)))
            if enters:
                trans.append(Transition(t.src, t.label, t.dst, (Op.RESET,)))
    return CounterAutomaton(kind, d.alphabet, d.states, d.initial, ("acc",), tuple(trans))


# ---------------------------------------------------------------------------
# omega-B / omega-S automata

def closure_automaton(a: CounterAutomaton) -> BuchiAutomaton:
    """Büchi automaton for the least omega-regular superset of ``L(a)``.

    Counters are dropped and every counter must be reset infinitely often.
    Each transition stands for a path ``eps* x`` of ``a`` (``x`` a letter)
    and its target remembers which counters that path reset; the accepting
    set for counter ``c`` holds the targets that remember ``c``.
    """
    _need_omega(a, Kind.WB)
    nc = len(a.counters)

    def flags(path_ops):
        bits = 0
        for ops in path_ops:
            for c, o in enumerate(ops):
                if o is Op.RESET:
                    bits |= 1 << c
        return bits

    def name(st):
        p, bits = st
        return pair_name(a.states[p], "".join("R" if bits >> c & 1 else "-" for c in range(nc)))

    start = [(a.index[q], 0) for q in sorted(a.initial)]
    names = {s: name(s) for s in start}
    queue = deque(start)
    trans = set()
    while queue:
        p, _ = cur = queue.popleft()
        for j, pre in eps_paths(a, p):
            for label, moves in a.moves[j].items():
                if label is None:
                    continue
                for d, ops in moves:
                    nxt = (d, flags(pre + [ops]))
                    if nxt not in names:
                        names[nxt] = name(nxt)
                        queue.append(nxt)
                    trans.add(Transition(names[cur], label, names[nxt]))
    if nc:
        acc = tuple(frozenset(v for (p, bits), v in names.items() if bits >> c & 1) for c in range(nc))
    else:
        acc = (frozenset(names.values()),)
    order = {v: i for i, v in enumerate(names.values())}
    trans = sorted(trans, key=lambda t: (order[t.src], t.label, order[t.dst]))
    return BuchiAutomaton(a.alphabet, tuple(names.values()), frozenset(names[s] for s in start),
                          tuple(trans), acc)


def intersect_omegaT(a1: CounterAutomaton, a2: CounterAutomaton) -> CounterAutomaton:
    _need_omega(a1)
    _need_omega(a2, a1.kind)
    return counter_product(a1, a2, a1.kind)


def _reachable_part(a: CounterAutomaton) -> CounterAutomaton:
    keep = a.reachable()
    return a if len(keep) == len(a.states) else restrict_states(a, keep)


def _empty_by_loops(a: CounterAutomaton) -> bool:
    if a.kind is Kind.WB:
        return buchi_is_empty(closure_automaton(a))
    return not good_loop_exists(a)


def _candidate_states(a: CounterAutomaton, m: TransitionMonoid, pairs: Iterable[LinkedPair]) -> dict[int, set[str]]:
    """Per idempotent ``e``: states ``q`` for which some linked pair
    ``(s, e)`` is not degenerate."""
    out: dict[int, set[str]] = {}
    for t in pairs:
        for q in a.states:
            if not degenerate(a, m, t, q):
                out.setdefault(t.e, set()).add(q)
    return out


def _empty_by_types(a: CounterAutomaton, limit: int) -> bool:
    m = transition_monoid(a, max_size=limit)
    for e, qs in _candidate_states(a, m, linked_pairs(m)).items():
        for q in sorted(qs):
            taus = [None] if a.kind is Kind.WB else all_taus(a)
            for tau in taus:
                part = TRegularProfinite(_loop_automaton(a, e, q, tau, False, None))
                if not is_empty(part):
                    return False
    return True


def omega_is_empty(a: CounterAutomaton, method: str = "auto", limit: int = TYPES_MONOID_LIMIT) -> bool:
    """Emptiness of an omega-B/omega-S automaton.

    ``types``: some linked pair of the transition monoid has a non-empty
    ``M_t``.  ``loops``: for omega-B, emptiness of the closure automaton;
    for omega-S, a reachable loop whose effect can be iterated with every
    counter's reset values growing.  ``auto`` uses ``types`` unless the
    monoid exceeds ``limit`` elements.
    """
    _need_omega(a)
    if method == "loops":
        return _empty_by_loops(a)
    if method == "types":
        return _empty_by_types(a, max(limit, 1 << 20))
    if method != "auto":
        raise ValueError(f"unknown emptiness method {method!r}")
    try:
        return _empty_by_types(a, limit)
    except MonoidTooLarge:
        return _empty_by_loops(a)


def up_membership(a: CounterAutomaton, u: UPWord, route: str = "reduction") -> bool:
    """Whether ``x.y^omega`` is in ``L(a)``.

    ``reduction``: canonical decomposition ``x.y^j, y^m, y^m, ...`` of type
    ``t`` and a non-empty part of ``M_t`` inside the closure of ``(y^m)+``.
    ``product``: non-emptiness of the product with the safety automaton of
    the word.  ``closure`` (omega-B only): membership in the closure
    automaton.
    """
    _need_omega(a)
    if route == "reduction":
        m = transition_monoid(a)
        dec = up_decomposition(u, m)
        within = word_nfa(dec.block, a.alphabet, plus=True)
        return not build_M_t(a, dec.pair, within).is_empty()
    if route == "product":
        return not omega_is_empty(product_safety(a, up_safety(u, a.alphabet)))
    if route == "closure":
        return buchi_up_membership(closure_automaton(a), u)
    raise ValueError(f"unknown membership route {route!r}")


# ---------------------------------------------------------------------------
# S_{t1,t2}

def build_S_t1t2(t1: LinkedPair | Sequence[tuple[int, int]], t2: LinkedPair | None,
                 m1: TransitionMonoid, m2: TransitionMonoid, r: NFA,
                 e_pair: tuple[int, int] | None = None) -> BuchiAutomaton:
    """Büchi automaton for ``S_{t1,t2}`` (see the module docstring).

    Either pass two linked pairs, or pass a list of first-block targets
    ``(s1, s2)`` as ``t1`` with ``t2=None`` and ``e_pair=(e1, e2)``; the
    latter accepts the union over those targets.
    """
    if t2 is not None:
        firsts = {(t1.s, t2.s)}
        e1, e2 = t1.e, t2.e
    else:
        firsts = set(t1)
        e1, e2 = e_pair
    if set(m1.alphabet) != set(r.alphabet) or set(m2.alphabet) != set(r.alphabet):
        raise AlphabetMismatch("monoids and R must share the alphabet")
    d = r if r.is_deterministic and all(len(row) == len(r.alphabet) for row in r.moves) else minimize_dfa(r)
    r0 = d.index[next(iter(d.initial))]
    r_acc = frozenset(d.index[q] for q in d.finals)
    delta = [{a: moves[0][0] for a, moves in row.items()} for row in d.moves]
    one1, one2 = m1.neutral, m2.neutral

    # state: (phase, x1, x2, T or None, cut flag)
    start = (0, one1, one2, None, False)

    def name(st):
        ph, x1, x2, tset, cut = st
        tpart = "-" if tset is None else "{" + " ".join(str(i) for i in sorted(tset)) + "}"
        return pair_name(ph, f"m{x1}", f"n{x2}", tpart, "cut" if cut else "")

    names = {start: name(start)}
    queue = deque([start])
    trans = []
    while queue:
        cur = queue.popleft()
        ph, x1, x2, tset, _ = cur
        for a in m1.alphabet:
            y1, y2 = m1.act(x1, a), m2.act(x2, a)
            t_after = None if tset is None else frozenset(delta[i][a] for i in tset)
            succs = [(ph, y1, y2, t_after, False)]
            hit = (y1, y2) in firsts if ph == 0 else (y1, y2) == (e1, e2)
            if hit:
                if t_after is None:
                    succs.append((1, one1, one2, None, True))
                    succs.append((1, one1, one2, frozenset({r0}), True))
                elif t_after <= r_acc:
                    succs.append((1, one1, one2, t_after | {r0}, True))
            for nxt in succs:
                if nxt not in names:
                    names[nxt] = name(nxt)
                    queue.append(nxt)
                trans.append(Transition(names[cur], a, names[nxt]))
    acc = frozenset(v for st, v in names.items() if st[4] and st[3] is not None)
    return BuchiAutomaton(m1.alphabet, tuple(names.values()), frozenset({names[start]}), tuple(trans), (acc,))


# ---------------------------------------------------------------------------
# the separator

def automaton_hash(a) -> str:
    return hashlib.sha256(dump_automaton(a).encode()).hexdigest()


@dataclass
class PairRecord:
    t1: LinkedPair
    t2: LinkedPair
    w_s: Word
    w_e: Word
    n0: int | None
    component: int


@dataclass
class SeparatorCertificate:
    """Everything needed to replay the construction's checks."""

    kind: Kind
    pairs: list[PairRecord]
    separators: list[NFA]
    components: list[BuchiAutomaton]
    component_initials: list[str]
    m1_parts: dict = field(default_factory=dict, repr=False)
    m2_parts: dict = field(default_factory=dict, repr=False)
    a1_hash: str = ""
    a2_hash: str = ""
    separator_hash: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": str(self.kind),
            "a1_sha256": self.a1_hash,
            "a2_sha256": self.a2_hash,
            "separator_sha256": self.separator_hash,
            "pairs": [
                {"t1": [p.t1.s, p.t1.e], "t2": [p.t2.s, p.t2.e], "w_s": list(p.w_s), "w_e": list(p.w_e),
                 "n0": p.n0, "component": p.component}
                for p in self.pairs
            ],
            "components": [{"initial": init, "R": to_dict(r)}
                           for init, r in zip(self.component_initials, self.separators)],
        }


def certificate_from_dict(doc: dict, a1: CounterAutomaton, a2: CounterAutomaton) -> SeparatorCertificate:
    """Rebuild a certificate from :meth:`SeparatorCertificate.to_dict`; the
    profinite parts are recomputed from ``a1`` and ``a2``.  If the recorded
    hashes do not match the automata no parts are recomputed (the types
    would refer to other monoids); the hash check then refuses the replay."""
    from .io import from_dict

    cache1: dict = {}
    cache2: dict = {}
    pairs = []
    matches = doc["a1_sha256"] == automaton_hash(a1) and doc["a2_sha256"] == automaton_hash(a2)
    for p in doc["pairs"]:
        t1, t2 = LinkedPair(*p["t1"]), LinkedPair(*p["t2"])
        if matches:
            _nonempty_parts(a1, t1, cache1)
            _nonempty_parts(a2, t2, cache2)
        pairs.append(PairRecord(t1, t2, tuple(p["w_s"]), tuple(p["w_e"]), p["n0"], p["component"]))
    comps = doc["components"]
    return SeparatorCertificate(Kind(doc["kind"]), pairs, [from_dict(c["R"]) for c in comps], [],
                                [c["initial"] for c in comps], cache1, cache2,
                                doc["a1_sha256"], doc["a2_sha256"], doc["separator_sha256"])


def _nonempty_parts(a: CounterAutomaton, t: LinkedPair, cache: dict) -> tuple[TRegularProfinite, ...]:
    if t not in cache:
        cache[t] = tuple(p for p in build_M_t(a, t).parts if not is_empty(p))
    return cache[t]


def find_up_witness(a: CounterAutomaton, px: int = 2, py: int = 3) -> UPWord | None:
    """Some ultimately periodic word of ``L(a)``, if one exists on a small grid."""
    for lx in range(px + 1):
        for x in itertools.product(a.alphabet, repeat=lx):
            for ly in range(1, py + 1):
                for y in itertools.product(a.alphabet, repeat=ly):
                    u = UPWord(x, y)
                    if up_membership(a, u):
                        return u
    return None


def check_disjoint(a1: CounterAutomaton, a2: CounterAutomaton) -> None:
    inter = intersect_omegaT(a1, a2)
    if not omega_is_empty(inter):
        raise NotDisjoint("the omega-languages intersect", find_up_witness(inter))


def separator_omega(a1: CounterAutomaton, a2: CounterAutomaton) -> tuple[BuchiAutomaton, SeparatorCertificate]:
    """Büchi automaton containing ``L(a1)`` and disjoint from ``L(a2)``."""
    _need_omega(a1)
    _need_omega(a2, a1.kind)
    if set(a1.alphabet) != set(a2.alphabet):
        raise AlphabetMismatch("separation needs a shared alphabet")
    check_disjoint(a1, a2)
    kind = a1.kind
    m1, m2 = transition_monoid(a1), transition_monoid(a2)
    cache1: dict = {}
    cache2: dict = {}
    groups: dict[tuple[int, int, NFA], list[tuple[CoherentWitness, int | None]]] = {}
    rcache: dict = {}
    for cw in coherent_pairs(m1, m2):
        parts1 = _nonempty_parts(a1, cw.t1, cache1)
        if not parts1:
            continue  # no word of L(a1) has a decomposition of this type
        parts2 = _nonempty_parts(a2, cw.t2, cache2)
        key = (parts1, parts2)
        if key not in rcache:
            if kind is Kind.WB:
                rcache[key] = (minimize_dfa(separator_B(parts1, parts2, a1.alphabet)), None)
            else:
                r, n0 = separator_S(parts1, parts2, a1.alphabet)
                rcache[key] = (minimize_dfa(r), n0)
        r, n0 = rcache[key]
        groups.setdefault((cw.t1.e, cw.t2.e, r), []).append((cw, n0))

    components, records, seps, inits = [], [], [], []
    for k, ((e1, e2, r), members) in enumerate(groups.items()):
        firsts = sorted({(cw.t1.s, cw.t2.s) for cw, _ in members})
        comp = build_S_t1t2(firsts, None, m1, m2, r, e_pair=(e1, e2))
        components.append(comp)
        seps.append(r)
        inits.append(pair_name(k, next(iter(comp.initial))))
        records.extend(PairRecord(cw.t1, cw.t2, cw.w_s, cw.w_e, n0, k) for cw, n0 in members)
    sep = buchi_union_all(components, a1.alphabet)
    cert = SeparatorCertificate(kind, records, seps, components, inits, cache1, cache2,
                                automaton_hash(a1), automaton_hash(a2), automaton_hash(sep))
    return sep, cert


def separator_omega_direct(a1: CounterAutomaton, a2: CounterAutomaton) -> BuchiAutomaton:
    """For omega-B only: the closure automaton of ``a1`` separates."""
    _need_omega(a1, Kind.WB)
    _need_omega(a2, Kind.WB)
    check_disjoint(a1, a2)
    return closure_automaton(a1)
