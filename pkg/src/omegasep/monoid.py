"""Transition monoids of automata, linked pairs and coherent pairs.

Elements are relations on the state set, stored as a tuple of row bitmasks
(bit ``j`` of row ``i`` means a run from state ``i`` to state ``j``) and
addressed by integer ids.  Epsilon moves are folded into letter images,
so ``h(a) = E . A_a . E`` with ``E`` the reflexive-transitive epsilon
closure.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .automata import UPWord, Word, _Graph

Relation = tuple[int, ...]
MAX_MONOID_SIZE = 4096


class MonoidTooLarge(RuntimeError):
    pass


def rel_product(r: Relation, s: Relation) -> Relation:
    out = []
    for row in r:
        acc = 0
        j = 0
        while row:
            if row & 1:
                acc |= s[j]
            row >>= 1
            j += 1
        out.append(acc)
    return tuple(out)


def identity_relation(n: int) -> Relation:
    return tuple(1 << i for i in range(n))


def eps_relation(a: _Graph) -> Relation:
    rows = [1 << i for i in range(len(a.states))]
    for i in reversed(a.eps_order):
        for d, _ in a.moves[i].get(None, ()):
            rows[i] |= rows[d]
    return tuple(rows)


def letter_relation(a: _Graph, sym: str) -> Relation:
    e = eps_relation(a)
    rows = [0] * len(a.states)
    for i, row in enumerate(a.moves):
        for d, _ in row.get(sym, ()):
            rows[i] |= 1 << d
    return rel_product(rel_product(e, tuple(rows)), e)


@dataclass(eq=False)
class TransitionMonoid:
    """Relations ``h(w)`` for all finite words ``w`` over an automaton.

    Element ``0`` is the neutral element.  ``words[i]`` is a shortest word
    mapped to element ``i``; ``nonempty`` holds the elements that some
    non-empty word maps to.
    """

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    elements: list[Relation]
    letters: dict[str, int]
    words: list[Word]
    nonempty: frozenset[int]
    _right: dict[tuple[int, str], int] = field(default_factory=dict, repr=False)
    _cache: dict[tuple[int, int], int] = field(default_factory=dict, repr=False)

    @property
    def neutral(self) -> int:
        return 0

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> dict[Relation, int]:
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {r: i for i, r in enumerate(self.elements)}
            self.__dict__["_index"] = idx
        return idx

    def mul(self, i: int, j: int) -> int:
        key = (i, j)
        out = self._cache.get(key)
        if out is None:
            out = self.index[rel_product(self.elements[i], self.elements[j])]
            self._cache[key] = out
        return out

    def act(self, i: int, sym: str) -> int:
        """``i . h(sym)``."""
        return self._right[(i, sym)]

    def power(self, i: int, k: int) -> int:
        out = self.neutral
        for _ in range(k):
            out = self.mul(out, i)
        return out

    def is_idempotent(self, i: int) -> bool:
        return self.mul(i, i) == i

    @property
    def table(self) -> np.ndarray:
        t = self.__dict__.get("_table")
        if t is None:
            n = len(self)
            t = np.empty((n, n), dtype=np.int32)
            for i in range(n):
                for j in range(n):
                    t[i, j] = self.mul(i, j)
            self.__dict__["_table"] = t
        return t

    def matrix(self, i: int) -> np.ndarray:
        n = len(self.states)
        m = np.zeros((n, n), dtype=bool)
        for r, row in enumerate(self.elements[i]):
            for c in range(n):
                m[r, c] = bool(row >> c & 1)
        return m

    def pairs(self, i: int) -> set[tuple[str, str]]:
        """Element ``i`` as a set of state pairs."""
        m = self.matrix(i)
        return {(self.states[r], self.states[c]) for r, c in zip(*np.nonzero(m))}

    def contains(self, i: int, p: str, q: str) -> bool:
        return bool(self.elements[i][self.states.index(p)] >> self.states.index(q) & 1)

    def idempotents(self) -> list[int]:
        return [i for i in range(len(self)) if self.is_idempotent(i)]


def h_image(m: TransitionMonoid, w: Iterable[str]) -> int:
    out = m.neutral
    for a in w:
        if a not in m.letters:
            from .automata import ForeignSymbol

            raise ForeignSymbol(f"symbol {a!r} is not in the alphabet {m.alphabet}")
        out = m.act(out, a)
    return out


def _build(a: _Graph, max_size: int) -> TransitionMonoid:
    n = len(a.states)
    letter_rel = {sym: letter_relation(a, sym) for sym in a.alphabet}
    one = identity_relation(n)
    elements = [one]
    index = {one: 0}
    words: list[Word] = [()]
    right: dict[tuple[int, str], int] = {}
    nonempty = set()
    # breadth-first over non-empty words; the neutral element gets a
    # non-empty witness only if some non-empty word maps to it
    queue = deque()
    for sym in a.alphabet:
        r = letter_rel[sym]
        if r not in index:
            index[r] = len(elements)
            elements.append(r)
            words.append((sym,))
        i = index[r]
        right[(0, sym)] = i
        if i not in nonempty:
            nonempty.add(i)
            queue.append(i)
    while queue:
        i = queue.popleft()
        for sym in a.alphabet:
            r = rel_product(elements[i], letter_rel[sym])
            j = index.get(r)
            if j is None:
                if len(elements) >= max_size:
                    raise MonoidTooLarge(f"transition monoid exceeds {max_size} elements")
                j = index[r] = len(elements)
                elements.append(r)
                words.append(words[i] + (sym,))
            right[(i, sym)] = j
            if j not in nonempty:
                nonempty.add(j)
                queue.append(j)
    mon = TransitionMonoid(tuple(a.states), tuple(a.alphabet), elements,
                           {sym: index[letter_rel[sym]] for sym in a.alphabet}, words, frozenset(nonempty))
    mon._right.update(right)
    mon.__dict__["_index"] = index
    return mon


@lru_cache(maxsize=256)
def _cached(a: _Graph, max_size: int) -> TransitionMonoid:
    return _build(a, max_size)


def transition_monoid(a: _Graph, max_size: int = MAX_MONOID_SIZE) -> TransitionMonoid:
    return _cached(a, max_size)


# ---------------------------------------------------------------------------
# linked pairs and decompositions

@dataclass(frozen=True)
class LinkedPair:
    s: int
    e: int


def linked_pairs(m: TransitionMonoid) -> list[LinkedPair]:
    """All ``(s, e)`` with ``s.e = s``, ``e.e = e``, both realised by
    non-empty words."""
    out = []
    realised = sorted(m.nonempty)
    for e in realised:
        if not m.is_idempotent(e):
            continue
        for s in realised:
            if m.mul(s, e) == s:
                out.append(LinkedPair(s, e))
    return out


def idempotent_exponent(m: TransitionMonoid, i: int) -> int:
    """Least ``k >= 1`` such that ``i^k`` is idempotent."""
    p = i
    k = 1
    while not m.is_idempotent(p):
        p = m.mul(p, i)
        k += 1
        if k > len(m) + 1:
            raise AssertionError("no idempotent power found; multiplication table is inconsistent")
    return k


@dataclass(frozen=True)
class UPDecomposition:
    """``x.y^omega`` cut as ``w0 = x.y^j`` followed by blocks ``y^m``."""

    pair: LinkedPair
    j: int
    m: int
    w0: Word
    block: Word


def up_decomposition(u: UPWord, m: TransitionMonoid) -> UPDecomposition:
    k = idempotent_exponent(m, h_image(m, u.period))
    e = m.power(h_image(m, u.period), k)
    s = m.mul(h_image(m, u.prefix), e)
    return UPDecomposition(LinkedPair(s, e), k, k, u.prefix + u.period * k, u.period * k)


@dataclass(frozen=True)
class CoherentWitness:
    t1: LinkedPair
    t2: LinkedPair
    w_s: Word
    w_e: Word


def product_images(m1: TransitionMonoid, m2: TransitionMonoid) -> dict[tuple[int, int], Word]:
    """Pairs ``(h1(w), h2(w))`` over non-empty words ``w``, each with a
    shortest witness."""
    if set(m1.alphabet) != set(m2.alphabet):
        from .automata import AlphabetMismatch

        raise AlphabetMismatch("coherence needs a shared alphabet")
    seen: dict[tuple[int, int], Word] = {}
    queue = deque()
    for a in m1.alphabet:
        p = (m1.letters[a], m2.letters[a])
        if p not in seen:
            seen[p] = (a,)
            queue.append(p)
    while queue:
        p = queue.popleft()
        for a in m1.alphabet:
            q = (m1.act(p[0], a), m2.act(p[1], a))
            if q not in seen:
                seen[q] = seen[p] + (a,)
                queue.append(q)
    return seen


def coherent_pairs(m1: TransitionMonoid, m2: TransitionMonoid) -> list[CoherentWitness]:
    reach = product_images(m1, m2)
    idem = [p for p in reach if m1.is_idempotent(p[0]) and m2.is_idempotent(p[1])]
    out = []
    for e1, e2 in sorted(idem):
        for (s1, s2), w_s in sorted(reach.items()):
            if m1.mul(s1, e1) == s1 and m2.mul(s2, e2) == s2:
                out.append(CoherentWitness(LinkedPair(s1, e1), LinkedPair(s2, e2), w_s, reach[(e1, e2)]))
    return out
