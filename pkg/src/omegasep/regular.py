"""Finite-word regular languages as NFAs.

Boolean operations, emptiness, shortest witnesses, inclusion and
equivalence.  An NFA also stands for the clopen set of profinite words it
generates, and these operations are exactly the Boolean algebra of those
sets.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .automata import NFA, AlphabetMismatch, Transition, Word, pair_name

DETERMINIZE_LIMIT = 1 << 16


class SizeLimitExceeded(RuntimeError):
    pass


def _same_alphabet(n1: NFA, n2: NFA) -> None:
    if set(n1.alphabet) != set(n2.alphabet):
        raise AlphabetMismatch(f"alphabets differ: {n1.alphabet} vs {n2.alphabet}")


def eps_closure(n: NFA, indices: Iterable[int]) -> frozenset[int]:
    seen = set(indices)
    stack = list(seen)
    while stack:
        i = stack.pop()
        for d, _ in n.moves[i].get(None, ()):
            if d not in seen:
                seen.add(d)
                stack.append(d)
    return frozenset(seen)


def step(n: NFA, current: frozenset[int], a: str) -> frozenset[int]:
    nxt = {d for i in current for d, _ in n.moves[i].get(a, ())}
    return eps_closure(n, nxt)


def initial_set(n: NFA) -> frozenset[int]:
    return eps_closure(n, (n.index[q] for q in n.initial))


def accepting(n: NFA, current: Iterable[int]) -> bool:
    return any(n.states[i] in n.finals for i in current)


def nfa_member(n: NFA, w: Iterable[str]) -> bool:
    cur = initial_set(n)
    for a in n.check_word(w):
        cur = step(n, cur, a)
        if not cur:
            return False
    return accepting(n, cur)


# ---------------------------------------------------------------------------
# constructors

def empty_nfa(alphabet: Sequence[str]) -> NFA:
    return NFA(tuple(alphabet), ("0",), frozenset(), frozenset(), ())


def universal_nfa(alphabet: Sequence[str]) -> NFA:
    return NFA(tuple(alphabet), ("0",), frozenset({"0"}), frozenset({"0"}),
               tuple(Transition("0", a, "0") for a in alphabet))


def word_nfa(w: Iterable[str], alphabet: Sequence[str], plus: bool = False) -> NFA:
    """NFA for the single word ``w`` (or for ``w+`` when ``plus``)."""
    w = tuple(w)
    if plus and not w:
        raise ValueError("w+ needs a non-empty w")
    names = tuple(str(i) for i in range(len(w) + 1))
    trans = [Transition(names[i], a, names[i + 1]) for i, a in enumerate(w)]
    if plus:
        trans.append(Transition(names[-1], w[0], names[1]))
    n = NFA(tuple(alphabet), names, frozenset({names[0]}), frozenset({names[-1]}), tuple(trans))
    n.check_word(w)
    return n


def nfa_from_regex(pattern: str, alphabet: Sequence[str]) -> NFA:
    """NFA (without epsilon moves) for a regex over single-character symbols.

    Supported: concatenation, ``|``, ``*``, ``+``, ``?``, parentheses, and
    ``.`` for any symbol.  ``()`` denotes the empty word.
    """
    alphabet = tuple(alphabet)
    eps: dict[int, set[int]] = {}
    letters: list[tuple[int, str, int]] = []
    size = 0
    pos = 0

    def fresh() -> int:
        nonlocal size
        size += 1
        eps[size - 1] = set()
        return size - 1

    def peek() -> str | None:
        return pattern[pos] if pos < len(pattern) else None

    def fail(msg: str):
        raise ValueError(f"regex {pattern!r}, column {pos + 1}: {msg}")

    def alternation() -> tuple[int, int]:
        nonlocal pos
        s, e = fresh(), fresh()
        while True:
            fs, fe = concatenation()
            eps[s].add(fs)
            eps[fe].add(e)
            if peek() != "|":
                return s, e
            pos += 1

    def concatenation() -> tuple[int, int]:
        s = e = fresh()
        while peek() is not None and peek() not in "|)":
            fs, fe = repetition()
            eps[e].add(fs)
            e = fe
        return s, e

    def repetition() -> tuple[int, int]:
        nonlocal pos
        fs, fe = atom()
        while peek() is not None and peek() in "*+?":
            op = pattern[pos]
            pos += 1
            s, e = fresh(), fresh()
            eps[s].add(fs)
            eps[fe].add(e)
            if op in "*?":
                eps[s].add(e)
            if op in "*+":
                eps[fe].add(fs)
            fs, fe = s, e
        return fs, fe

    def atom() -> tuple[int, int]:
        nonlocal pos
        ch = peek()
        if ch == "(":
            pos += 1
            frag = alternation()
            if peek() != ")":
                fail("expected ')'")
            pos += 1
            return frag
        if ch is None or ch in "|)*+?":
            fail(f"unexpected {ch!r}")
        pos += 1
        s, e = fresh(), fresh()
        for a in alphabet if ch == "." else (ch,):
            if a not in alphabet:
                fail(f"symbol {a!r} is not in the alphabet")
            letters.append((s, a, e))
        return s, e

    start, end = alternation()
    if pos != len(pattern):
        fail(f"unexpected {pattern[pos]!r}")

    closure = {}
    for i in range(size):
        seen, stack = {i}, [i]
        while stack:
            for j in eps[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        closure[i] = seen
    out = {}
    for s, a, e in letters:
        out.setdefault(s, []).append((a, e))
    trans = {(i, a, e) for i in range(size) for j in closure[i] for a, e in out.get(j, ())}
    finals = {i for i in range(size) if end in closure[i]}
    n = NFA(alphabet, tuple(str(i) for i in range(size)), frozenset({str(start)}),
            frozenset(str(i) for i in finals),
            tuple(Transition(str(i), a, str(e)) for i, a, e in sorted(trans)))
    return trim_nfa(n)


# ---------------------------------------------------------------------------
# Boolean algebra

def determinize(n: NFA, complete: bool = True, limit: int = DETERMINIZE_LIMIT) -> NFA:
    """Subset construction; result states are ``d0, d1, ...``."""
    if n.is_deterministic and not complete:
        return n
    start = initial_set(n)
    ids = {start: 0}
    queue = deque([start])
    edges = []
    while queue:
        cur = queue.popleft()
        for a in n.alphabet:
            nxt = step(n, cur, a)
            if not nxt and not complete:
                continue
            if nxt not in ids:
                if len(ids) >= limit:
                    raise SizeLimitExceeded(f"determinization exceeds {limit} subset states")
                ids[nxt] = len(ids)
                queue.append(nxt)
            edges.append(Transition(f"d{ids[cur]}", a, f"d{ids[nxt]}"))
    states = tuple(f"d{i}" for i in range(len(ids)))
    finals = frozenset(f"d{i}" for s, i in ids.items() if accepting(n, s))
    return NFA(n.alphabet, states, frozenset({"d0"}), finals, tuple(edges))


def nfa_complement(n: NFA) -> NFA:
    d = determinize(n, complete=True)
    return NFA(d.alphabet, d.states, d.initial, frozenset(d.states) - d.finals, d.transitions)


def nfa_intersect(n1: NFA, n2: NFA) -> NFA:
    """Synchronised product; epsilon moves of either side run alone."""
    _same_alphabet(n1, n2)
    start = [(p, q) for p in sorted(n1.initial) for q in sorted(n2.initial)]
    names = {s: pair_name(*s) for s in start}
    queue = deque(start)
    trans = []

    def visit(src, dst, label):
        if dst not in names:
            names[dst] = pair_name(*dst)
            queue.append(dst)
        trans.append(Transition(names[src], label, names[dst]))

    while queue:
        p, q = queue.popleft()
        r1 = n1.moves[n1.index[p]]
        r2 = n2.moves[n2.index[q]]
        for d, _ in r1.get(None, ()):
            visit((p, q), (n1.states[d], q), None)
        for d, _ in r2.get(None, ()):
            visit((p, q), (p, n2.states[d]), None)
        for a, moves in r1.items():
            if a is None:
                continue
            for d1, _ in moves:
                for d2, _ in r2.get(a, ()):
                    visit((p, q), (n1.states[d1], n2.states[d2]), a)
    finals = frozenset(v for (p, q), v in names.items() if p in n1.finals and q in n2.finals)
    return NFA(n1.alphabet, tuple(names.values()), frozenset(names[s] for s in start), finals, tuple(trans))


def disjoint_union(parts: Sequence[NFA]) -> NFA:
    if not parts:
        raise ValueError("union of no automata")
    for p in parts[1:]:
        _same_alphabet(parts[0], p)
    states, trans, init, fin = [], [], set(), set()
    for k, n in enumerate(parts):
        ren = {q: pair_name(k, q) for q in n.states}
        states.extend(ren.values())
        init |= {ren[q] for q in n.initial}
        fin |= {ren[q] for q in n.finals}
        trans.extend(Transition(ren[t.src], t.label, ren[t.dst]) for t in n.transitions)
    return NFA(parts[0].alphabet, tuple(states), frozenset(init), frozenset(fin), tuple(trans))


def nfa_union(n1: NFA, n2: NFA) -> NFA:
    return disjoint_union([n1, n2])


def nfa_difference(n1: NFA, n2: NFA) -> NFA:
    return nfa_intersect(n1, nfa_complement(n2))


def shortest_word(n: NFA) -> Word | None:
    """A shortest accepted word, or ``None`` if the language is empty.

    Breadth-first over states with epsilon moves at zero cost.
    """
    dist: dict[int, int] = {}
    back: dict[int, tuple[int, str | None] | None] = {}
    dq: deque[int] = deque()
    for q in n.initial:
        i = n.index[q]
        dist[i] = 0
        back[i] = None
        dq.append(i)
    done = set()
    while dq:
        i = dq.popleft()
        if i in done:
            continue
        done.add(i)
        if n.states[i] in n.finals:
            word = []
            while back[i] is not None:
                i, a = back[i]
                if a is not None:
                    word.append(a)
            return tuple(reversed(word))
        for a, moves in n.moves[i].items():
            cost = 0 if a is None else 1
            for d, _ in moves:
                nd = dist[i] + cost
                if d not in dist or nd < dist[d]:
                    dist[d] = nd
                    back[d] = (i, a)
                    if cost:
                        dq.append(d)
                    else:
                        dq.appendleft(d)
    return None


def nfa_is_empty(n: NFA) -> bool:
    reach = n.reachable()
    return not (reach & n.finals)


def inclusion_counterexample(n1: NFA, n2: NFA, limit: int = DETERMINIZE_LIMIT) -> Word | None:
    """A shortest word in L(n1) minus L(n2), or ``None`` if L(n1) is included.

    Explores pairs (state of n1, subset of n2).  A pair is dropped when a
    known pair has the same n1-state and a smaller subset: every word that
    leaves L(n2) from the larger subset also leaves it from the smaller one,
    and breadth-first order reaches the smaller one no later.
    """
    _same_alphabet(n1, n2)
    s2 = initial_set(n2)
    frontier: dict[int, list[frozenset[int]]] = {}
    parent: dict = {}
    queue = deque()

    def offer(pair, back) -> None:
        p, sub = pair
        known = frontier.setdefault(p, [])
        if any(k <= sub for k in known):
            return
        if len(parent) >= limit:
            raise SizeLimitExceeded(f"inclusion check exceeds {limit} state/subset pairs")
        known[:] = [k for k in known if not sub <= k]
        known.append(sub)
        parent[pair] = back
        queue.append(pair)

    for q in sorted(initial_set(n1)):
        offer((q, s2), None)
    while queue:
        cur = queue.popleft()
        p, sub = cur
        if sub not in frontier[p]:
            continue  # superseded by a smaller subset
        if n1.states[p] in n1.finals and not accepting(n2, sub):
            word = []
            while parent[cur] is not None:
                cur, a = parent[cur]
                word.append(a)
            return tuple(reversed(word))
        for a in n1.alphabet:
            succ = step(n1, frozenset({p}), a)
            if not succ:
                continue
            t2 = step(n2, sub, a)
            for r in sorted(succ):
                offer((r, t2), (cur, a))
    return None


def nfa_included(n1: NFA, n2: NFA) -> bool:
    return inclusion_counterexample(n1, n2) is None


def nfa_equivalent(n1: NFA, n2: NFA) -> bool:
    return nfa_included(n1, n2) and nfa_included(n2, n1)


def minimize_dfa(d: NFA) -> NFA:
    """Minimal complete DFA for L(d) (determinizes first if needed)."""
    if not d.is_deterministic or any(len(row) < len(d.alphabet) for row in d.moves):
        d = determinize(d, complete=True)
    d = d if len(d.reachable()) == len(d.states) else _restrict_nfa(d, d.reachable())
    delta = [[d.moves[i][a][0][0] for a in d.alphabet] for i in range(len(d.states))]
    block = [1 if q in d.finals else 0 for q in d.states]
    while True:
        sig = {}
        new = []
        for i in range(len(d.states)):
            key = (block[i],) + tuple(block[j] for j in delta[i])
            new.append(sig.setdefault(key, len(sig)))
        if len(sig) == len(set(block)):
            block = new
            break
        block = new
    # renumber so the initial state's block is m0 and the rest follow BFS order
    init = d.index[next(iter(d.initial))]
    order = {block[init]: 0}
    queue = deque([init])
    seen = {init}
    while queue:
        i = queue.popleft()
        for j in delta[i]:
            if block[j] not in order:
                order[block[j]] = len(order)
            if j not in seen:
                seen.add(j)
                queue.append(j)
    names = [f"m{k}" for k in range(len(order))]
    trans = set()
    finals = set()
    for i in range(len(d.states)):
        src = names[order[block[i]]]
        if d.states[i] in d.finals:
            finals.add(src)
        for a, j in zip(d.alphabet, delta[i]):
            trans.add(Transition(src, a, names[order[block[j]]]))
    trans = sorted(trans, key=lambda t: (int(t.src[1:]), d.alphabet.index(t.label)))
    return NFA(d.alphabet, tuple(names), frozenset({"m0"}), frozenset(finals), tuple(trans))


def _restrict_nfa(n: NFA, keep: set[str]) -> NFA:
    states = tuple(q for q in n.states if q in keep)
    trans = tuple(t for t in n.transitions if t.src in keep and t.dst in keep)
    return NFA(n.alphabet, states, n.initial & keep, n.finals & keep, trans)


def trim_nfa(n: NFA) -> NFA:
    keep = n.reachable() & n.coreachable(n.finals)
    if len(keep) == len(n.states):
        return n
    if not keep:
        return empty_nfa(n.alphabet)
    return _restrict_nfa(n, keep)


def words_upto(alphabet: Sequence[str], length: int):
    """All words of length at most ``length``, shortest first."""
    from itertools import product

    for k in range(length + 1):
        yield from product(alphabet, repeat=k)
