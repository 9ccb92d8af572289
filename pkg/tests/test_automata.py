import math

import pytest
from hypothesis import given, settings, strategies as st

from omegasep.automata import (NFA, BuchiAutomaton, CounterAutomaton, ForeignSymbol, Kind, Op, Transition, UPWord,
                               eliminate_epsilon, longest_eps_path, product_safety, strip, trim, up_safety,
                               validate)
from omegasep.fixtures import catalog, fig1, fig2
from omegasep.harness import random_up_words
from omegasep.omega import buchi_up_membership, omega_is_empty, up_membership
from omegasep.regular import words_upto
from omegasep.words import value

from conftest import AB, counter_automata, up_words


def codes(a):
    return [d.code for d in validate(a)]


def test_fixtures_validate_cleanly():
    for f in catalog().values():
        assert validate(f.automaton) == [], f.name


def test_epsilon_self_loop_is_reported():
    a = CounterAutomaton("S", AB, ("p",), {"p"}, ("c",), (Transition("p", None, "p", (Op.NIL,)),), {"p"})
    assert codes(a) == ["epsilon-cycle"]


def test_unknown_state_is_reported():
    a = CounterAutomaton("B", AB, ("p",), {"p"}, (), (Transition("p", "a", "nowhere"),), {"p"})
    assert codes(a) == ["unknown-state"]


@pytest.mark.parametrize("build, code", [
    (lambda: CounterAutomaton("B", (), ("p",), {"p"}, (), (), {"p"}), "empty-alphabet"),
    (lambda: CounterAutomaton("B", ("a", "a"), ("p",), {"p"}, (), (), {"p"}), "duplicate-symbol"),
    (lambda: CounterAutomaton("B", AB, ("p", "p"), {"p"}, (), (), {"p"}), "duplicate-state"),
    (lambda: CounterAutomaton("B", AB, ("p",), {"p"}, ("c", "c"), (), {"p"}), "duplicate-counter"),
    (lambda: CounterAutomaton("B", AB, ("p",), {"p"}, (), (Transition("p", "z", "p"),), {"p"}), "unknown-symbol"),
    (lambda: CounterAutomaton("B", AB, ("p",), {"p"}, ("c",), (Transition("p", "a", "p"),), {"p"}), "ops-arity"),
    (lambda: CounterAutomaton("wB", AB, ("p",), {"p"}, (), (), {"p"}), "finals-kind"),
    (lambda: CounterAutomaton("S", AB, ("p",), {"p"}, (), (), None), "finals-kind"),
    (lambda: BuchiAutomaton(AB, ("p",), {"p"}, (Transition("p", None, "p"),), ({"p"},)), "epsilon-in-buchi"),
    (lambda: BuchiAutomaton(AB, ("p",), {"p"}, (), ()), "empty-acceptance"),
])
def test_each_diagnostic(build, code):
    assert code in codes(build())


def test_eps_order_rejects_cycles():
    a = NFA(AB, ("p", "q"), {"p"}, {"q"}, (Transition("p", None, "q"), Transition("q", None, "p")))
    with pytest.raises(ValueError):
        a.eps_order


def test_check_word_rejects_foreign_symbols():
    with pytest.raises(ForeignSymbol):
        fig2().check_word("abc")


def test_up_word_letters_and_rendering():
    u = UPWord("ba", "ab")
    assert u.take(7) == tuple("baababa")
    assert str(u) == "ba(ab)^w"
    with pytest.raises(ValueError):
        UPWord("a", "")


def test_up_safety_shape():
    d = up_safety(UPWord((), "ab"), AB)
    assert d.is_deterministic
    assert len(d.acceptance[0]) == 2 and "sink" in d.states


@given(up_words, up_words)
def test_up_safety_accepts_exactly_its_word(u, v):
    d = up_safety(u, AB)
    same = u.take(40) == v.take(40)  # prefixes and periods are short, so 40 letters decide equality
    assert buchi_up_membership(d, v) == same


def test_up_safety_rejects_wrong_first_letter():
    assert not buchi_up_membership(up_safety(UPWord((), "a"), AB), UPWord((), "b"))
    assert buchi_up_membership(up_safety(UPWord("a", "a"), AB), UPWord((), "a"))


def test_product_safety_keeps_only_the_word():
    p = product_safety(fig1(), up_safety(UPWord((), "ab"), AB))
    for u in random_up_words(3, 20):
        expected = u.take(40) == UPWord((), "ab").take(40) and up_membership(fig1(), u)
        assert up_membership(p, u, "product") == expected


def test_product_with_all_accepting_safety_is_neutral():
    top = BuchiAutomaton(AB, ("t",), {"t"}, tuple(Transition("t", x, "t") for x in AB), ({"t"},))
    p = product_safety(fig1(), top)
    for u in random_up_words(5, 50):
        assert up_membership(p, u) == up_membership(fig1(), u)


def test_product_with_empty_safety_is_empty():
    bottom = BuchiAutomaton(AB, ("t",), {"t"}, tuple(Transition("t", x, "t") for x in AB), (frozenset(),))
    assert omega_is_empty(product_safety(fig1(), bottom))


def test_strip_and_trim():
    n = strip(fig2())
    assert isinstance(n, NFA) and n.finals == {"qF"}
    a = CounterAutomaton("B", AB, ("p", "dead", "q"), {"p"}, (), (Transition("p", "a", "q"), Transition("p", "b", "dead")),
                         {"q"})
    assert trim(a).states == ("p", "q")


def test_eliminate_epsilon_identity_without_epsilon():
    a = fig1()
    assert eliminate_epsilon(a) is a


def test_eliminate_epsilon_fig2_within_factor_two():
    a, e = fig2(), eliminate_epsilon(fig2())
    assert not e.has_epsilon
    for w in words_upto(AB, 6):
        old, new = value(a, w), value(e, w)
        assert new <= old <= 2 * new + 1


@given(counter_automata("B", max_states=4))
def test_eliminate_epsilon_bound_B(a):
    _check_bound(a)


@given(counter_automata("S", max_states=4))
def test_eliminate_epsilon_bound_S(a):
    _check_bound(a)


def _check_bound(a):
    e = eliminate_epsilon(a)
    assert not e.has_epsilon
    k = 2 * longest_eps_path(a) + 1
    for w in words_upto(AB, 4):
        old, new = value(a, w), value(e, w)
        assert new <= old
        assert (old == math.inf) == (new == math.inf)
        if old != math.inf:
            assert old <= k * (new + 2)


@settings(max_examples=15)
@given(counter_automata("wB", max_states=3, max_counters=1), st.integers(0, 1000))
def test_eliminate_epsilon_keeps_omega_B_languages(a, seed):
    e = eliminate_epsilon(a)
    for u in random_up_words(seed, 8):
        assert up_membership(a, u, "product") == up_membership(e, u, "product")


@settings(max_examples=10)
@given(counter_automata("wS", max_states=2, max_counters=1), st.integers(0, 1000))
def test_eliminate_epsilon_keeps_omega_S_languages(a, seed):
    e = eliminate_epsilon(a)
    for u in random_up_words(seed, 6):
        assert up_membership(a, u, "product") == up_membership(e, u, "product")


def test_eliminate_epsilon_repeated_resets_in_omega_S():
    # an epsilon move resetting right after a resetting letter: reset values 0 forever
    a = CounterAutomaton("wS", AB, ("p", "q"), {"p"}, ("c",), (
        Transition("p", "a", "q", (Op.RESET,)), Transition("q", None, "p", (Op.RESET,)),
        Transition("p", "b", "p", (Op.INC,)),
    ))
    e = eliminate_epsilon(a)
    assert not e.has_epsilon and len(e.counters) == 2
    for u in (UPWord((), "ab"), UPWord((), "a"), UPWord("a", "b")):
        assert up_membership(a, u, "product") == up_membership(e, u, "product")
