"""Values of finite words under B- and S-automata, and the cutoff languages
``{w : value <= n}`` (B) and ``{w : value > n}`` (S) as NFAs.

Values are ``int`` or ``math.inf``.  Conventions: the minimum of nothing is
infinite and the maximum of nothing is zero, so a word without accepting run
has B-value ``inf`` and S-value ``0``, while an accepting run without resets
has B-value ``0`` and S-value ``inf``.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .automata import NFA, CounterAutomaton, Kind, Op, Transition, Word, pair_name
from .regular import words_upto

ExtNat = float  # int or math.inf; annotated loosely on purpose


def _kind_ok(a: CounterAutomaton, b: bool) -> None:
    if a.finals is None:
        raise ValueError("finite-word values need an automaton with final states")
    if a.kind.is_b != b:
        raise ValueError(f"expected a {'B' if b else 'S'} automaton, got {a.kind}")


def _value(a: CounterAutomaton, w: Iterable[str], b_mode: bool) -> ExtNat:
    w = a.check_word(w)
    nc = len(a.counters)
    # best aggregate per configuration (state index, valuation)
    better = min if b_mode else max
    unit = 0 if b_mode else math.inf
    fold = max if b_mode else min

    def apply(vals, ops, agg):
        new = list(vals)
        for c, o in enumerate(ops):
            if o is Op.INC:
                new[c] += 1
            elif o is Op.RESET:
                agg = fold(agg, new[c])
                new[c] = 0
        return tuple(new), agg

    def close(confs: dict) -> dict:
        by_state: dict[int, dict] = {}
        for (i, vals), agg in confs.items():
            by_state.setdefault(i, {})[vals] = agg
        for i in a.eps_order:
            here = by_state.get(i)
            if not here:
                continue
            for d, ops in a.moves[i].get(None, ()):
                tgt = by_state.setdefault(d, {})
                for vals, agg in here.items():
                    nv, na = apply(vals, ops, agg)
                    tgt[nv] = better(tgt[nv], na) if nv in tgt else na
        return {(i, v): g for i, row in by_state.items() for v, g in row.items()}

    confs = close({(a.index[q], (0,) * nc): unit for q in a.initial})
    for sym in w:
        nxt: dict = {}
        for (i, vals), agg in confs.items():
            for d, ops in a.moves[i].get(sym, ()):
                nv, na = apply(vals, ops, agg)
                key = (d, nv)
                nxt[key] = better(nxt[key], na) if key in nxt else na
        confs = close(nxt)
    finals = {a.index[q] for q in a.finals}
    results = [agg for (i, _), agg in confs.items() if i in finals]
    if not results:
        return math.inf if b_mode else 0
    return better(results)


def value_B(a: CounterAutomaton, w: Iterable[str]) -> ExtNat:
    """Minimum over accepting runs of the largest reset value."""
    _kind_ok(a, True)
    return _value(a, w, True)


def value_S(a: CounterAutomaton, w: Iterable[str]) -> ExtNat:
    """Maximum over accepting runs of the smallest reset value."""
    _kind_ok(a, False)
    return _value(a, w, False)


def value(a: CounterAutomaton, w: Iterable[str]) -> ExtNat:
    return value_B(a, w) if a.kind.is_b else value_S(a, w)


# ---------------------------------------------------------------------------
# explicit runs

@dataclass(frozen=True)
class Run:
    """A run as its sequence of transitions (epsilon moves included).

    Cut positions ``k`` range over ``0..len(transitions)``; cut ``k`` lies
    just before ``transitions[k]``.
    """

    automaton: CounterAutomaton
    transitions: tuple[Transition, ...]

    def __post_init__(self):
        for t1, t2 in zip(self.transitions, self.transitions[1:]):
            if t1.dst != t2.src:
                raise ValueError(f"transitions do not chain: {t1} then {t2}")

    @property
    def word(self) -> Word:
        return tuple(t.label for t in self.transitions if t.label is not None)

    def trace(self) -> list[tuple[int, ...]]:
        """Counter valuation at every cut, starting from all zeros."""
        vals = [0] * len(self.automaton.counters)
        out = [tuple(vals)]
        for t in self.transitions:
            for c, o in enumerate(t.ops):
                if o is Op.INC:
                    vals[c] += 1
                elif o is Op.RESET:
                    vals[c] = 0
            out.append(tuple(vals))
        return out

    def resets(self) -> list[tuple[str, int, int]]:
        """``(counter, transition index, value reset)`` for every reset."""
        trace = self.trace()
        out = []
        for k, t in enumerate(self.transitions):
            for c, o in enumerate(t.ops):
                if o is Op.RESET:
                    out.append((self.automaton.counters[c], k, trace[k][c]))
        return out

    def value(self) -> ExtNat:
        vals = [v for _, _, v in self.resets()]
        if self.automaton.kind.is_b:
            return max(vals, default=0)
        return min(vals, default=math.inf)


def runs(a: CounterAutomaton, w: Iterable[str], accepting_only: bool = True) -> Iterator[Run]:
    """Every run over ``w`` from an initial state, by depth-first search."""
    w = a.check_word(w)
    out_edges: dict[str, list[Transition]] = {}
    for t in a.transitions:
        out_edges.setdefault(t.src, []).append(t)

    def dfs(state: str, pos: int, path: list[Transition]):
        if pos == len(w) and (not accepting_only or (a.finals is not None and state in a.finals)):
            yield Run(a, tuple(path))
        for t in out_edges.get(state, ()):
            if t.label is None:
                yield from dfs(t.dst, pos, path + [t])
            elif pos < len(w) and t.label == w[pos]:
                yield from dfs(t.dst, pos + 1, path + [t])

    for q in sorted(a.initial):
        yield from dfs(q, 0, [])


ENUMERATION_BUDGET = 10


def enumerate_values(a: CounterAutomaton, length: int, budget: int = ENUMERATION_BUDGET) -> dict[Word, ExtNat]:
    """Values of all words up to ``length`` by brute-force run enumeration."""
    if length > budget:
        raise ValueError(f"word length {length} exceeds the enumeration budget {budget}")
    b_mode = a.kind.is_b
    out = {}
    for w in words_upto(a.alphabet, length):
        vals = [r.value() for r in runs(a, w)]
        if b_mode:
            out[w] = min(vals, default=math.inf)
        else:
            out[w] = max(vals, default=0)
    return out


# ---------------------------------------------------------------------------
# cutoff languages

def _cutoff(a: CounterAutomaton, n: int, b_mode: bool) -> NFA:
    if n < 0:
        raise ValueError("cutoff threshold must be non-negative")
    top = n + 1

    def apply(vals, ops):
        new = list(vals)
        for c, o in enumerate(ops):
            if o is Op.INC:
                new[c] = min(new[c] + 1, top)
            elif o is Op.RESET:
                # B: reset only from a value <= n; S: only from the cap n+1
                if (b_mode and new[c] > n) or (not b_mode and new[c] != top):
                    return None
                new[c] = 0
        return tuple(new)

    start = [(q, (0,) * len(a.counters)) for q in sorted(a.initial)]
    names = {s: pair_name(s[0], *s[1]) for s in start}
    queue = deque(start)
    trans = []
    while queue:
        q, vals = cur = queue.popleft()
        for label, moves in a.moves[a.index[q]].items():
            for d, ops in moves:
                nv = apply(vals, ops)
                if nv is None:
                    continue
                nxt = (a.states[d], nv)
                if nxt not in names:
                    names[nxt] = pair_name(nxt[0], *nv)
                    queue.append(nxt)
                trans.append(Transition(names[cur], label, names[nxt]))
    finals = frozenset(v for (q, _), v in names.items() if q in a.finals)
    return NFA(a.alphabet, tuple(names.values()), frozenset(names[s] for s in start), finals, tuple(trans))


def cutoff_B(a: CounterAutomaton, n: int) -> NFA:
    """NFA for ``{w : value_B(a, w) <= n}``."""
    _kind_ok(a, True)
    return _cutoff(a, n, True)


def cutoff_S(a: CounterAutomaton, n: int) -> NFA:
    """NFA for ``{w : value_S(a, w) > n}``."""
    _kind_ok(a, False)
    return _cutoff(a, n, False)


def cutoff(a: CounterAutomaton, n: int) -> NFA:
    return cutoff_B(a, n) if a.kind.is_b else cutoff_S(a, n)
