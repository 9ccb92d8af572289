import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from omegasep.automata import NFA, ForeignSymbol, Transition, UPWord
from omegasep.fixtures import fig1, fig2
from omegasep.harness import random_automaton
from omegasep.monoid import (LinkedPair, MonoidTooLarge, coherent_pairs, h_image, idempotent_exponent, linked_pairs,
                             product_images, transition_monoid, up_decomposition)

from conftest import AB, counter_automata, up_words


def reach(a, w):
    """Pairs (p, q) with q reachable from p on w, epsilon moves anywhere."""
    def close(qs):
        todo, seen = list(qs), set(qs)
        while todo:
            p = todo.pop()
            for t in a.transitions:
                if t.src == p and t.label is None and t.dst not in seen:
                    seen.add(t.dst)
                    todo.append(t.dst)
        return seen

    out = set()
    for p in a.states:
        cur = {p}
        for x in w:
            cur = {t.dst for t in a.transitions if t.src in close(cur) and t.label == x}
        out |= {(p, q) for q in close(cur)}
    return out


def random_automata(count=20, seed=0):
    rng = random.Random(seed)
    return [random_automaton(rng, "B", max_states=3) for _ in range(count)]


def test_single_edge_monoid():
    a = NFA(AB, ("p", "q"), {"p"}, {"q"}, (Transition("p", "a", "q"),))
    m = transition_monoid(a)
    assert len(m) == 3
    assert [m.pairs(i) for i in range(3)] == [{("p", "p"), ("q", "q")}, {("p", "q")}, set()]
    assert m.words == [(), ("a",), ("b",)]


def test_fig1_monoid():
    m = transition_monoid(fig1())
    assert m.pairs(h_image(m, "b")) == {("qI", "qI"), ("qI", "qM"), ("qM", "qI")}
    assert m.words == [(), ("b",), ("b", "b")]
    assert m.idempotents() == [0, 2]
    assert [(t.s, t.e) for t in linked_pairs(m)] == [(0, 0), (1, 0), (2, 0), (2, 2)]


def test_h_image_rejects_foreign_symbols():
    with pytest.raises(ForeignSymbol):
        h_image(transition_monoid(fig1()), "abc")


def test_size_guard():
    # the n-th letter from the end automaton has a monoid far beyond 16 elements
    n = 6
    trans = [Transition("0", x, "0") for x in AB] + [Transition("0", "a", "1")]
    trans += [Transition(str(i), x, str(i + 1)) for i in range(1, n) for x in AB]
    big = NFA(AB, tuple(str(i) for i in range(n + 1)), {"0"}, {str(n)}, tuple(trans))
    with pytest.raises(MonoidTooLarge):
        transition_monoid(big, max_size=16)


@pytest.mark.parametrize("a", random_automata() + [fig1(), fig2()], ids=lambda a: str(len(a.states)))
def test_associativity_table(a):
    m = transition_monoid(a)
    if len(m) > 64:
        pytest.skip("associativity is checked exhaustively up to 64 elements")
    t = m.table
    n = len(m)
    for i, j, k in itertools.product(range(n), repeat=3):
        assert t[t[i, j], k] == t[i, t[j, k]]
    assert all(t[0, i] == t[i, 0] == i for i in range(n))


@settings(max_examples=40)
@given(counter_automata("B"), st.lists(st.sampled_from(AB), max_size=6), st.lists(st.sampled_from(AB), max_size=6))
def test_homomorphism(a, u, v):
    m = transition_monoid(a)
    assert h_image(m, u + v) == m.mul(h_image(m, u), h_image(m, v))


@settings(max_examples=40)
@given(counter_automata("S"), st.lists(st.sampled_from(AB), min_size=1, max_size=5))
def test_elements_are_reachability_relations(a, w):
    m = transition_monoid(a)
    assert m.pairs(h_image(m, w)) == reach(a, w)


@settings(max_examples=40)
@given(counter_automata("B"))
def test_shortest_words_map_to_their_element(a):
    m = transition_monoid(a)
    for i, w in enumerate(m.words):
        assert h_image(m, w) == i
        assert i == 0 or i in m.nonempty


@settings(max_examples=40)
@given(counter_automata("B"))
def test_linked_pairs_are_linked(a):
    m = transition_monoid(a)
    pairs = linked_pairs(m)
    for t in pairs:
        assert m.mul(t.s, t.e) == t.s and m.mul(t.e, t.e) == t.e
    # every idempotent realised by a non-empty word is linked with itself
    for e in m.idempotents():
        if e in m.nonempty:
            assert LinkedPair(e, e) in pairs


@settings(max_examples=40)
@given(counter_automata("B"))
def test_idempotent_exponent_is_least(a):
    m = transition_monoid(a)
    for i in range(len(m)):
        k = idempotent_exponent(m, i)
        assert m.is_idempotent(m.power(i, k))
        assert not any(m.is_idempotent(m.power(i, j)) for j in range(1, k))


def test_up_decomposition_of_fig1():
    m = transition_monoid(fig1())
    d = up_decomposition(UPWord((), "ab"), m)
    assert (d.pair.s, d.pair.e, d.j, d.m) == (2, 2, 2, 2)
    assert d.w0 == d.block == tuple("abab")


@settings(max_examples=40)
@given(counter_automata("wB"), up_words)
def test_up_decomposition_is_a_linked_cut(a, u):
    m = transition_monoid(a)
    d = up_decomposition(u, m)
    assert h_image(m, d.w0) == d.pair.s
    assert h_image(m, d.block) == d.pair.e
    assert d.w0 == tuple(u.prefix) + tuple(u.period) * d.j
    assert m.mul(d.pair.s, d.pair.e) == d.pair.s and m.is_idempotent(d.pair.e)


@settings(max_examples=30)
@given(counter_automata("wB", max_states=2), counter_automata("wB", max_states=2))
def test_coherent_pairs_have_common_witnesses(a1, a2):
    m1, m2 = transition_monoid(a1), transition_monoid(a2)
    images = product_images(m1, m2)
    for (i1, i2), w in images.items():
        assert w and (h_image(m1, w), h_image(m2, w)) == (i1, i2)
    for c in coherent_pairs(m1, m2):
        assert (h_image(m1, c.w_s), h_image(m2, c.w_s)) == (c.t1.s, c.t2.s)
        assert (h_image(m1, c.w_e), h_image(m2, c.w_e)) == (c.t1.e, c.t2.e)
        assert m1.mul(c.t1.s, c.t1.e) == c.t1.s and m2.mul(c.t2.s, c.t2.e) == c.t2.s


@settings(max_examples=30)
@given(counter_automata("wB", max_states=2), counter_automata("wB", max_states=2), up_words)
def test_every_up_word_realises_a_coherent_pair(a1, a2, u):
    m1, m2 = transition_monoid(a1), transition_monoid(a2)
    # a common multiple of both exponents makes both block images idempotent
    k = idempotent_exponent(m1, h_image(m1, u.period)) * idempotent_exponent(m2, h_image(m2, u.period))
    block, w0 = tuple(u.period) * k, tuple(u.prefix) + tuple(u.period) * k
    t1 = LinkedPair(h_image(m1, w0), h_image(m1, block))
    t2 = LinkedPair(h_image(m2, w0), h_image(m2, block))
    assert any(c.t1 == t1 and c.t2 == t2 for c in coherent_pairs(m1, m2))
