"""Counter automata, NFAs and Büchi automata.

Every automaton is an immutable value.  States and symbols are short text
tokens, words are sequences of symbols (a plain ``str`` works when every
symbol is a single character).  Transitions may be labelled ``None``, which
stands for an epsilon move; automata must not contain a cycle made of
epsilon moves only.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Sequence

Word = tuple[str, ...]
EPS = None


class Op(str, enum.Enum):
    NIL = "nil"
    INC = "inc"
    RESET = "reset"

    def __str__(self) -> str:
        return self.value


class Kind(str, enum.Enum):
    B = "B"
    S = "S"
    WB = "wB"
    WS = "wS"

    def __str__(self) -> str:
        return self.value

    @property
    def is_omega(self) -> bool:
        return self in (Kind.WB, Kind.WS)

    @property
    def finite(self) -> "Kind":
        """The finite-word kind with the same counter semantics (wB -> B)."""
        return {Kind.WB: Kind.B, Kind.WS: Kind.S}.get(self, self)

    @property
    def omega(self) -> "Kind":
        return {Kind.B: Kind.WB, Kind.S: Kind.WS}.get(self, self)

    @property
    def is_b(self) -> bool:
        return self in (Kind.B, Kind.WB)


class AlphabetMismatch(ValueError):
    pass


class ForeignSymbol(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    src: str
    label: str | None
    dst: str
    ops: tuple[Op, ...] = ()

    def __post_init__(self):
        if not isinstance(self.ops, tuple) or any(not isinstance(o, Op) for o in self.ops):
            object.__setattr__(self, "ops", tuple(Op(o) for o in self.ops))

    @property
    def is_epsilon(self) -> bool:
        return self.label is None


def as_word(w: Iterable[str]) -> Word:
    return tuple(w)


@dataclass(frozen=True)
class UPWord:
    """The ultimately periodic word ``prefix . period^omega``."""

    prefix: Word
    period: Word

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise ValueError("period of an ultimately periodic word must be non-empty")

    def letter(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def take(self, n: int) -> Word:
        return tuple(self.letter(i) for i in range(n))

    def __str__(self) -> str:
        return "{}({})^w".format("".join(self.prefix), "".join(self.period))


class _Graph:
    """Index tables shared by all automaton classes (computed lazily)."""

    states: tuple[str, ...]
    transitions: tuple[Transition, ...]
    initial: frozenset

    @cached_property
    def index(self) -> dict[str, int]:
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def moves(self) -> list[dict[str | None, list[tuple[int, tuple[Op, ...]]]]]:
        """Per source state: label -> [(dst index, ops)], epsilon under ``None``."""
        table: list[dict] = [dict() for _ in self.states]
        idx = self.index
        for t in self.transitions:
            table[idx[t.src]].setdefault(t.label, []).append((idx[t.dst], t.ops))
        return table

    @cached_property
    def eps_order(self) -> list[int]:
        """State indices in a topological order of the epsilon graph."""
        n = len(self.states)
        indeg = [0] * n
        for row in self.moves:
            for d, _ in row.get(None, ()):
                indeg[d] += 1
        queue = deque(i for i in range(n) if indeg[i] == 0)
        order = []
        while queue:
            i = queue.popleft()
            order.append(i)
            for d, _ in self.moves[i].get(None, ()):
                indeg[d] -= 1
                if indeg[d] == 0:
                    queue.append(d)
        if len(order) != n:
            raise ValueError("automaton has a cycle of epsilon transitions")
        return order

    @cached_property
    def has_epsilon(self) -> bool:
        return any(t.label is None for t in self.transitions)

    def check_word(self, w: Iterable[str]) -> Word:
        w = tuple(w)
        known = set(self.alphabet)
        for a in w:
            if a not in known:
                raise ForeignSymbol(f"symbol {a!r} is not in the alphabet {self.alphabet}")
        return w

    def successors(self) -> list[set[int]]:
        return [{d for moves in row.values() for d, _ in moves} for row in self.moves]

    def reachable(self, sources: Iterable[str] | None = None) -> set[str]:
        srcs = self.initial if sources is None else sources
        succ = self.successors()
        seen = {self.index[q] for q in srcs}
        stack = list(seen)
        while stack:
            i = stack.pop()
            for j in succ[i]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return {self.states[i] for i in seen}

    def coreachable(self, targets: Iterable[str]) -> set[str]:
        pred: list[set[int]] = [set() for _ in self.states]
        for i, s in enumerate(self.successors()):
            for j in s:
                pred[j].add(i)
        seen = {self.index[q] for q in targets}
        stack = list(seen)
        while stack:
            i = stack.pop()
            for j in pred[i]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return {self.states[i] for i in seen}


def _coerce(obj, *, sets=(), tuples=()):
    for name in sets:
        val = getattr(obj, name)
        if val is not None and not isinstance(val, frozenset):
            object.__setattr__(obj, name, frozenset(val))
    for name in tuples:
        val = getattr(obj, name)
        if not isinstance(val, tuple):
            object.__setattr__(obj, name, tuple(val))


@dataclass(frozen=True)
class CounterAutomaton(_Graph):
    """Counter automaton of one of the kinds B, S (finite words) or wB, wS."""

    kind: Kind
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    initial: frozenset[str]
    counters: tuple[str, ...]
    transitions: tuple[Transition, ...]
    finals: frozenset[str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        _coerce(self, sets=("initial", "finals"), tuples=("alphabet", "states", "counters", "transitions"))

    def with_kind(self, kind: Kind | str, finals: Iterable[str] | None = None) -> "CounterAutomaton":
        kind = Kind(kind)
        if kind.is_omega:
            return replace(self, kind=kind, finals=None)
        fin = self.finals if finals is None else frozenset(finals)
        if fin is None:
            raise ValueError(f"kind {kind} needs final states")
        return replace(self, kind=kind, finals=fin)

    def op(self, t: Transition, counter: str) -> Op:
        return t.ops[self.counters.index(counter)]


@dataclass(frozen=True)
class NFA(_Graph):
    """Finite-word automaton; also stands for the closure of its language."""

    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    initial: frozenset[str]
    finals: frozenset[str]
    transitions: tuple[Transition, ...]

    counters = ()

    def __post_init__(self):
        _coerce(self, sets=("initial", "finals"), tuples=("alphabet", "states", "transitions"))

    @cached_property
    def is_deterministic(self) -> bool:
        if len(self.initial) > 1 or self.has_epsilon:
            return False
        return all(len(v) == 1 for row in self.moves for v in row.values())


@dataclass(frozen=True)
class BuchiAutomaton(_Graph):
    """Generalized Büchi automaton; a run must visit every set in
    ``acceptance`` infinitely often."""

    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    initial: frozenset[str]
    transitions: tuple[Transition, ...]
    acceptance: tuple[frozenset[str], ...]

    counters = ()

    def __post_init__(self):
        _coerce(self, sets=("initial",), tuples=("alphabet", "states", "transitions"))
        object.__setattr__(self, "acceptance", tuple(frozenset(s) for s in self.acceptance))

    @cached_property
    def is_deterministic(self) -> bool:
        if len(self.initial) > 1 or self.has_epsilon:
            return False
        return all(len(v) == 1 for row in self.moves for v in row.values())

    @cached_property
    def safety_live(self) -> frozenset[str] | None:
        """Live states if this is a safety automaton (one accepting set whose
        complement is a trap), else ``None``."""
        if len(self.acceptance) != 1:
            return None
        live = self.acceptance[0]
        for t in self.transitions:
            if t.src not in live and t.dst in live:
                return None
        return live


Automaton = CounterAutomaton | NFA | BuchiAutomaton


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    location: str = ""

    def __str__(self) -> str:
        return f"{self.code}: {self.message}" + (f" [{self.location}]" if self.location else "")


def _eps_cycle(states: Sequence[str], transitions: Iterable[Transition]) -> list[str] | None:
    succ: dict[str, list[str]] = {q: [] for q in states}
    for t in transitions:
        if t.label is None and t.src in succ and t.dst in succ:
            succ[t.src].append(t.dst)
    color = dict.fromkeys(states, 0)
    for root in states:
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        path = [root]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                stack.pop()
                path.pop()
            elif color[nxt] == 1:
                return path[path.index(nxt):] + [nxt]
            elif color[nxt] == 0:
                color[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
                path.append(nxt)
    return None


def validate(a: Automaton) -> list[Diagnostic]:
    """Structural check; returns one diagnostic per violated invariant."""
    out: list[Diagnostic] = []
    if not a.alphabet:
        out.append(Diagnostic("empty-alphabet", "alphabet is empty"))
    if len(set(a.alphabet)) != len(a.alphabet):
        out.append(Diagnostic("duplicate-symbol", "alphabet symbols are not distinct"))
    if len(set(a.states)) != len(a.states):
        out.append(Diagnostic("duplicate-state", "state names are not distinct"))
    declared = set(a.states)
    symbols = set(a.alphabet)
    for q in sorted(a.initial - declared):
        out.append(Diagnostic("unknown-state", f"initial state {q!r} is not declared", "initial"))

    ncount = len(a.counters)
    if isinstance(a, CounterAutomaton) and len(set(a.counters)) != ncount:
        out.append(Diagnostic("duplicate-counter", "counter names are not distinct"))
    for i, t in enumerate(a.transitions):
        loc = f"transitions[{i}]"
        for end in (t.src, t.dst):
            if end not in declared:
                out.append(Diagnostic("unknown-state", f"transition endpoint {end!r} is not declared", loc))
        if t.label is not None and t.label not in symbols:
            out.append(Diagnostic("unknown-symbol", f"label {t.label!r} is not in the alphabet", loc))
        if len(t.ops) != ncount:
            out.append(Diagnostic("ops-arity", f"{len(t.ops)} counter operations for {ncount} counters", loc))
        if isinstance(a, BuchiAutomaton) and t.label is None:
            out.append(Diagnostic("epsilon-in-buchi", "Büchi automata have no epsilon moves", loc))

    cycle = _eps_cycle(a.states, a.transitions)
    if cycle:
        out.append(Diagnostic("epsilon-cycle", "cycle of epsilon transitions: " + " -> ".join(cycle)))

    if isinstance(a, CounterAutomaton):
        if a.kind.is_omega and a.finals is not None:
            out.append(Diagnostic("finals-kind", f"kind {a.kind} must not declare final states"))
        if not a.kind.is_omega and a.finals is None:
            out.append(Diagnostic("finals-kind", f"kind {a.kind} needs final states"))
    finals = getattr(a, "finals", None)
    if finals:
        for q in sorted(finals - declared):
            out.append(Diagnostic("unknown-state", f"final state {q!r} is not declared", "finals"))
    if isinstance(a, BuchiAutomaton):
        if not a.acceptance:
            out.append(Diagnostic("empty-acceptance", "acceptance list is empty"))
        for i, acc in enumerate(a.acceptance):
            for q in sorted(acc - declared):
                out.append(Diagnostic("unknown-state", f"accepting state {q!r} is not declared", f"acceptance[{i}]"))
    return out


# ---------------------------------------------------------------------------
# small constructors and helpers

def pair_name(*parts: object) -> str:
    return "(" + ",".join(str(p) for p in parts) + ")"


def restrict_states(a: Automaton, keep: Iterable[str]) -> Automaton:
    """Sub-automaton induced by ``keep`` (order of ``a.states`` preserved)."""
    keep = set(keep)
    states = tuple(q for q in a.states if q in keep)
    trans = tuple(t for t in a.transitions if t.src in keep and t.dst in keep)
    kw = dict(states=states, transitions=trans, initial=a.initial & keep)
    if getattr(a, "finals", None) is not None:
        kw["finals"] = a.finals & keep
    if isinstance(a, BuchiAutomaton):
        kw["acceptance"] = tuple(s & keep for s in a.acceptance)
    return replace(a, **kw)


def trim(a: CounterAutomaton | NFA) -> CounterAutomaton | NFA:
    """Keep states reachable from the initial states and, when final states
    exist, co-reachable to them."""
    keep = a.reachable()
    finals = getattr(a, "finals", None)
    if finals is not None:
        keep &= a.coreachable(finals)
    if len(keep) == len(a.states):
        return a
    return restrict_states(a, keep)


def strip(a: CounterAutomaton) -> NFA:
    """Forget the counters of a B- or S-automaton."""
    if a.finals is None:
        raise ValueError("only finite-word kinds can be stripped to an NFA")
    return NFA(a.alphabet, a.states, a.initial, a.finals,
               tuple(Transition(t.src, t.label, t.dst) for t in a.transitions))


def empty_counter_automaton(kind: Kind, alphabet: Sequence[str], counters: Sequence[str] = ()) -> CounterAutomaton:
    kind = Kind(kind)
    return CounterAutomaton(kind, tuple(alphabet), ("*",), frozenset(), tuple(counters), (),
                            None if kind.is_omega else frozenset({"*"}))


def up_safety(u: UPWord, alphabet: Sequence[str]) -> BuchiAutomaton:
    """Deterministic complete safety automaton accepting exactly ``u``."""
    alphabet = tuple(alphabet)
    for a in u.prefix + u.period:
        if a not in alphabet:
            raise ForeignSymbol(f"symbol {a!r} is not in the alphabet {alphabet}")
    n = len(u.prefix) + len(u.period)
    live = tuple(str(i) for i in range(n))
    trans = []
    for i in range(n):
        nxt = i + 1 if i + 1 < n else len(u.prefix)
        for a in alphabet:
            dst = live[nxt] if a == u.letter(i) else "sink"
            trans.append(Transition(live[i], a, dst))
    trans.extend(Transition("sink", a, "sink") for a in alphabet)
    return BuchiAutomaton(alphabet, live + ("sink",), frozenset({"0"}), tuple(trans), (frozenset(live),))


def product_safety(a: CounterAutomaton, d: BuchiAutomaton) -> CounterAutomaton:
    """Synchronous product with a deterministic safety automaton; epsilon
    moves of ``a`` leave ``d`` where it is."""
    if set(a.alphabet) != set(d.alphabet):
        raise AlphabetMismatch("product of automata over different alphabets")
    live = d.safety_live
    if live is None or not d.is_deterministic:
        raise ValueError("second argument must be a deterministic safety automaton")
    step = {(t.src, t.label): t.dst for t in d.transitions}
    start = [(p, q) for p in sorted(a.initial) for q in sorted(d.initial) if q in live]
    seen = {s: pair_name(*s) for s in start}
    queue = deque(start)
    trans = []
    while queue:
        p, q = queue.popleft()
        src = seen[(p, q)]
        for label, moves in a.moves[a.index[p]].items():
            if label is None:
                q2 = q
            else:
                q2 = step.get((q, label))
                if q2 is None or q2 not in live:
                    continue
            for dst, ops in moves:
                nxt = (a.states[dst], q2)
                if nxt not in seen:
                    seen[nxt] = pair_name(*nxt)
                    queue.append(nxt)
                trans.append(Transition(src, label, seen[nxt], ops))
    finals = None
    if a.finals is not None:
        finals = frozenset(n for (p, _), n in seen.items() if p in a.finals)
    return CounterAutomaton(a.kind, a.alphabet, tuple(seen.values()),
                            frozenset(seen[s] for s in start), a.counters, tuple(trans), finals)


def _combine_ops(seq: Sequence[tuple[Op, ...]], ncount: int) -> tuple[Op, ...]:
    out = []
    for c in range(ncount):
        col = [ops[c] for ops in seq]
        if Op.RESET in col:
            out.append(Op.RESET)
        elif Op.INC in col:
            out.append(Op.INC)
        else:
            out.append(Op.NIL)
    return tuple(out)


def eps_paths(a: _Graph, i: int) -> Iterator[tuple[int, list[tuple[Op, ...]]]]:
    """All epsilon paths from state index ``i`` (including the empty one),
    as (end state, list of op vectors)."""
    stack = [(i, [])]
    while stack:
        j, ops = stack.pop()
        yield j, ops
        for d, o in a.moves[j].get(None, ()):
            stack.append((d, ops + [o]))


def longest_eps_path(a: _Graph) -> int:
    """Number of transitions on the longest epsilon path."""
    depth = [0] * len(a.states)
    for i in reversed(a.eps_order):
        depth[i] = max((1 + depth[d] for d, _ in a.moves[i].get(None, ())), default=0)
    return max(depth, default=0)


def _segments(a: CounterAutomaton):
    """Every path ``eps* x eps*`` as (src, letter, dst, merged ops, repeated),
    where ``repeated`` says some counter is reset twice on the path."""
    n = len(a.counters)
    out = set()
    for i, p in enumerate(a.states):
        for j, pre in eps_paths(a, i):
            for label, moves in a.moves[j].items():
                if label is None:
                    continue
                for k, ops in moves:
                    for m, post in eps_paths(a, k):
                        seq = pre + [ops] + post
                        repeated = any(sum(o[c] is Op.RESET for o in seq) > 1 for c in range(n))
                        out.add((p, label, a.states[m], _combine_ops(seq, n), repeated))
    return sorted(out, key=lambda s: (a.index[s[0]], s[1], a.index[s[2]], s[3], s[4]))


def eliminate_epsilon(a: CounterAutomaton) -> CounterAutomaton:
    """Equivalent automaton without epsilon moves.

    Each new transition stands for a path ``eps* x eps*`` whose operations
    are merged per counter (any reset wins, then inc).  With ``K`` the most
    increments one such path can carry, finite-word values satisfy
    ``new <= old <= K * (new + 2)``; omega languages are kept exactly.

    A path resetting some counter twice has a reset of value below ``K`` in
    the middle.  B kinds merge it away, which only lowers a maximum.  S
    drops such paths, since their runs have value below ``K`` anyway.  wS
    may use them only finitely often: the result runs in two phases, the
    second without them, and an extra counter (never reset in the first
    phase, free to reset with growing gaps in the second) forces every
    accepting run into the second phase.
    """
    if not a.has_epsilon:
        return a
    segs = _segments(a)
    finals = a.finals
    if finals is not None:
        extra = set()
        for q in a.initial:
            for j, path in eps_paths(a, a.index[q]):
                if a.states[j] not in finals or not path:
                    continue
                resets = any(Op.RESET in ops for ops in path)
                # B: any epsilon route keeps the empty word accepted.
                # S: only a reset-free route keeps the value infinite.
                if a.kind.is_b or not resets:
                    extra.add(q)
        finals = finals | extra
    if a.kind.is_b or not any(r for *_, r in segs):
        trans = tuple(dict.fromkeys(Transition(p, x, q, ops) for p, x, q, ops, _ in segs))
        return replace(a, transitions=trans, finals=finals)
    if a.kind is Kind.S:
        trans = tuple(dict.fromkeys(Transition(p, x, q, ops) for p, x, q, ops, r in segs if not r))
        return replace(a, transitions=trans, finals=finals)

    phase = "phase"
    while phase in a.counters:
        phase += "'"
    names = {(q, k): pair_name(q, k) for k in (0, 1) for q in a.states}
    trans = []
    for p, x, q, ops, repeated in segs:
        trans.append(Transition(names[p, 0], x, names[q, 0], ops + (Op.NIL,)))
        if not repeated:
            for src in (names[p, 0], names[p, 1]):
                trans.append(Transition(src, x, names[q, 1], ops + (Op.INC,)))
                trans.append(Transition(src, x, names[q, 1], ops + (Op.RESET,)))
    return CounterAutomaton(a.kind, a.alphabet, tuple(names.values()), frozenset(names[q, 0] for q in a.initial),
                            a.counters + (phase,), tuple(trans), None)
