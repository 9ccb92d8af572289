"""Loop automata for a type ``t = (s, e)`` of an omega-automaton.

For an omega-B automaton the parts are B-automata ``A_q``; for an omega-S
automaton they are S-automata ``A_{q,tau}``.  Each part reads words that
loop on ``q``, map to ``e`` and reset every counter; its denotation lies in
the closure of ``h^-1(e)``.  The union of the parts is ``M_t``.

Epsilon moves of the source automaton are copied into the parts (the
``h^-1(e)`` tracker stays put on them), so runs may interleave them exactly
as in the source.
"""
from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .automata import NFA, CounterAutomaton, Kind, Op, Transition, empty_counter_automaton, pair_name
from .monoid import LinkedPair, TransitionMonoid, transition_monoid
from .profinite import TRegularProfinite
from .words import Run


class EndType(str, enum.Enum):
    LEFT = "←"
    RIGHT = "→"

    def __str__(self) -> str:
        return self.value


Tau = tuple[EndType, ...]


def end_type(run: Run, counter: str, k: int) -> EndType:
    """RIGHT when more increments of ``counter`` lie between cut ``k`` and
    the next reset than between the previous reset and ``k``.  A side with
    no reset counts as zero increments."""
    a = run.automaton
    if counter not in a.counters:
        raise KeyError(f"unknown counter {counter!r}")
    if not 0 <= k <= len(run.transitions):
        raise IndexError(f"cut {k} outside 0..{len(run.transitions)}")
    c = a.counters.index(counter)
    ops = [t.ops[c] for t in run.transitions]

    v_left = 0
    for i in range(k - 1, -1, -1):
        if ops[i] is Op.RESET:
            v_left = sum(o is Op.INC for o in ops[i + 1:k])
            break
    v_right = 0
    for i in range(k, len(ops)):
        if ops[i] is Op.RESET:
            v_right = sum(o is Op.INC for o in ops[k:i])
            break
    return EndType.RIGHT if v_left < v_right else EndType.LEFT


def monoid_dfa(m: TransitionMonoid, e: int) -> NFA:
    """Deterministic automaton for ``h^-1(e)``: states are monoid elements,
    the initial one is the neutral element."""
    names = [f"m{i}" for i in range(len(m))]
    trans = tuple(Transition(names[i], a, names[m.act(i, a)]) for i in range(len(m)) for a in m.alphabet)
    return NFA(m.alphabet, tuple(names), frozenset({names[m.neutral]}), frozenset({names[e]}), trans)


def check_linked(m: TransitionMonoid, t: LinkedPair) -> None:
    if not (0 <= t.s < len(m) and 0 <= t.e < len(m)):
        raise ValueError(f"{t} refers to elements outside the monoid")
    if m.mul(t.s, t.e) != t.s or m.mul(t.e, t.e) != t.e:
        raise ValueError(f"{t} is not a linked pair (need s.e = s and e.e = e)")


def degenerate(a: CounterAutomaton, m: TransitionMonoid, t: LinkedPair, q: str) -> bool:
    """No initial state reaches ``q`` under ``s``, or ``(q, q)`` is not in ``e``."""
    if not m.contains(t.e, q, q):
        return True
    return not any(m.contains(t.s, q0, q) for q0 in a.initial)


def _tau_key(a: CounterAutomaton, tau) -> Tau | None:
    if tau is None:
        return None
    if isinstance(tau, dict):
        tau = tuple(tau[c] for c in a.counters)
    tau = tuple(EndType(x) for x in tau)
    if len(tau) != len(a.counters):
        raise ValueError(f"tau has {len(tau)} entries for {len(a.counters)} counters")
    return tau


@lru_cache(maxsize=4096)
def _loop_automaton(a: CounterAutomaton, e: int, q: str, tau: Tau | None, full: bool,
                    within: NFA | None) -> CounterAutomaton:
    m = transition_monoid(a)
    nc = len(a.counters)
    all_reset = (1 << nc) - 1
    s_mode = tau is not None
    kind = Kind.S if s_mode else Kind.B
    left = [s_mode and tau[c] is EndType.LEFT for c in range(nc)]

    def rewrite(ops, bits):
        out = []
        new_bits = bits
        for c, o in enumerate(ops):
            seen = bits >> c & 1
            out.append(Op.NIL if left[c] and not seen else o)
            if o is Op.RESET:
                new_bits |= 1 << c
        return tuple(out), new_bits

    def bits_name(bits):
        return "".join("T" if bits >> c & 1 else "F" for c in range(nc))

    end_ops = tuple(Op.RESET if (not s_mode or left[c]) else Op.NIL for c in range(nc))
    names: dict = {}
    trans = []
    qi = a.index[q]

    def name(st):
        p, r, bits, n = st
        parts = (a.states[p], f"m{r}", bits_name(bits)) + (() if n is None else (within.states[n],))
        return pair_name(*parts)

    if full and within is None:
        for p, r, bits in itertools.product(range(len(a.states)), range(len(m)), range(all_reset + 1)):
            names[(p, r, bits, None)] = name((p, r, bits, None))
    start_n = [None] if within is None else sorted(within.index[x] for x in within.initial)
    starts = [(qi, m.neutral, 0, n) for n in start_n]
    queue = deque()
    for st in starts:
        if st not in names:
            names[st] = name(st)
        queue.append(st)
    expanded = set()
    if full and within is None:
        queue = deque(names)

    def visit(src, dst, label, ops):
        if dst not in names:
            names[dst] = name(dst)
            queue.append(dst)
        trans.append(Transition(names[src], label, names[dst], ops))

    finals_n = None if within is None else {within.index[x] for x in within.finals}
    while queue:
        st = queue.popleft()
        if st in expanded:
            continue
        expanded.add(st)
        p, r, bits, n = st
        for label, moves in a.moves[p].items():
            if label is None:
                for d, ops in moves:
                    o2, b2 = rewrite(ops, bits)
                    visit(st, (d, r, b2, n), None, o2)
                continue
            r2 = m.act(r, label)
            n_next = [None] if n is None else [d for d, _ in within.moves[n].get(label, ())]
            for d, ops in moves:
                o2, b2 = rewrite(ops, bits)
                for n2 in n_next:
                    visit(st, (d, r2, b2, n2), label, o2)
        if n is not None:
            for d, _ in within.moves[n].get(None, ()):
                visit(st, (p, r, bits, d), None, (Op.NIL,) * nc)
        if p == qi and r == e and bits == all_reset and (n is None or n in finals_n):
            trans.append(Transition(names[st], None, "*", end_ops))
    states = tuple(names.values()) + ("*",)
    return CounterAutomaton(kind, a.alphabet, states, frozenset(names[s] for s in starts), a.counters,
                            tuple(trans), frozenset({"*"}))


def _part(a: CounterAutomaton, t: LinkedPair, q: str, tau, trim: bool, within: NFA | None,
          want: Kind) -> TRegularProfinite:
    if a.kind is not want:
        raise ValueError(f"expected an {want} automaton, got {a.kind}")
    m = transition_monoid(a)
    check_linked(m, t)
    if q not in a.index:
        raise KeyError(f"unknown state {q!r}")
    if degenerate(a, m, t, q):
        return TRegularProfinite(empty_counter_automaton(want.finite, a.alphabet, a.counters))
    return TRegularProfinite(_loop_automaton(a, t.e, q, _tau_key(a, tau), not trim, within))


def build_A_q(a: CounterAutomaton, t: LinkedPair, q: str, trim: bool = True,
              within: NFA | None = None) -> TRegularProfinite:
    """B-automaton reading loops on ``q`` inside ``h^-1(e)`` that reset every
    counter, with a final reset of all counters.

    ``trim=False`` builds the whole state space.  ``within`` restricts the
    part to ``L(within)`` by a product built on the fly.
    """
    return _part(a, t, q, None, trim, within, Kind.WB)


def build_A_q_tau(a: CounterAutomaton, t: LinkedPair, q: str, tau, trim: bool = True,
                  within: NFA | None = None) -> TRegularProfinite:
    """S-automaton as :func:`build_A_q`, except that counters with
    ``tau = LEFT`` ignore everything up to their first reset and are reset
    once more at the end, while ``tau = RIGHT`` counters behave as in ``a``."""
    if tau is None:
        raise ValueError("build_A_q_tau needs a tau vector")
    return _part(a, t, q, tau, trim, within, Kind.WS)


@dataclass(frozen=True)
class MtLanguage:
    kind: Kind
    pair: LinkedPair
    parts: tuple[TRegularProfinite, ...]
    index: tuple[tuple[str, Tau | None], ...]

    def is_empty(self) -> bool:
        from .profinite import is_empty

        return all(is_empty(p) for p in self.parts)


def all_taus(a: CounterAutomaton) -> list[Tau]:
    return list(itertools.product((EndType.LEFT, EndType.RIGHT), repeat=len(a.counters)))


def build_M_t(a: CounterAutomaton, t: LinkedPair, within: NFA | None = None) -> MtLanguage:
    """All non-degenerate parts for ``t``."""
    if not a.kind.is_omega:
        raise ValueError("M_t is defined for omega-automata")
    m = transition_monoid(a)
    check_linked(m, t)
    parts, index = [], []
    for q in a.states:
        if degenerate(a, m, t, q):
            continue
        if a.kind is Kind.WB:
            parts.append(build_A_q(a, t, q, within=within))
            index.append((q, None))
        else:
            for tau in all_taus(a):
                parts.append(build_A_q_tau(a, t, q, tau, within=within))
                index.append((q, tau))
    return MtLanguage(a.kind.finite, t, tuple(parts), tuple(index))
