import random

import pytest
from hypothesis import given, settings

from omegasep import effects as fx
from omegasep.automata import strip
from omegasep.fixtures import (b_pairs, cnt1, fig1, fig2, letter_counter, no_accepting_run, s_pairs,
                               single_increment, two_counter_s)
from omegasep.harness import random_automaton
from omegasep.profinite import (NotDisjoint, TRegularProfinite, intersect_T, is_disjoint_T, is_empty, is_empty_B,
                                is_empty_S, is_empty_S_matrix, is_empty_union, restrict_profinite, separator_B,
                                separator_S, separator_T, stabilization_closure, union_automaton)
from omegasep.regular import (SizeLimitExceeded, nfa_complement, nfa_equivalent, nfa_from_regex, nfa_is_empty,
                              shortest_word)
from omegasep.words import cutoff_S, value_S

from conftest import AB, counter_automata

T = TRegularProfinite


def test_rejects_omega_automata():
    with pytest.raises(ValueError):
        T(fig1())


@pytest.mark.parametrize("a, empty", [
    (fig2(), False), (single_increment(), True), (no_accepting_run(), True), (two_counter_s(), False),
    (letter_counter("a"), False),
])
def test_S_emptiness_of_fixtures(a, empty):
    assert is_empty_S(a) == empty
    assert is_empty_S_matrix(a) == empty


def test_restriction_of_fig2():
    assert not is_empty(restrict_profinite(T(fig2()), nfa_from_regex("a*", AB)))
    assert is_empty(restrict_profinite(T(fig2()), nfa_from_regex("b*", AB)))
    # values on (ab)* grow with the length, on (a|b)b* they stay at most 1
    assert not is_empty(restrict_profinite(T(fig2()), nfa_from_regex("(ab)*", AB)))
    assert is_empty(restrict_profinite(T(fig2()), nfa_from_regex("(a|b)?b*", AB)))


def test_B_emptiness_is_word_emptiness():
    assert not is_empty_B(T(cnt1()))
    assert is_empty_B(T(no_accepting_run("B")))


def test_closure_of_fig2_pumps_the_counter():
    closure = stabilization_closure(fig2())
    q_i, q_f = fig2().index["qI"], fig2().index["qF"]
    target = (fx.reset(fx.W, fx.LARGE, fx.ZERO),)
    assert any(p == q_i and q == q_f and v == target for m in closure for p, q, v in m)


def test_closure_of_single_increment_never_pumps():
    effects = {v[0] for m in stabilization_closure(single_increment()) for _, _, v in m}
    allowed = {fx.no_reset(0), fx.no_reset(1), fx.reset(0, fx.LARGE, 0), fx.reset(1, fx.LARGE, 0)}
    assert effects <= allowed
    assert fx.reset(1, fx.LARGE, 0) in effects


def _seeded(count, seed, **kw):
    rng = random.Random(seed)
    return [random_automaton(rng, "S", **kw) for _ in range(count)]


@pytest.mark.parametrize("a", _seeded(60, 11, max_states=3, max_counters=1), ids=lambda a: str(len(a.states)))
def test_matrix_and_component_algorithms_agree(a):
    try:
        expected = is_empty_S_matrix(a, limit=600)
    except SizeLimitExceeded:
        pytest.skip("matrix closure too large for a unit test")
    assert is_empty_S(a) == expected


@pytest.mark.parametrize("a", _seeded(15, 12, max_states=2, max_counters=2), ids=lambda a: str(len(a.states)))
def test_algorithms_agree_with_two_counters(a):
    try:
        expected = is_empty_S_matrix(a, limit=600)
    except SizeLimitExceeded:
        pytest.skip("matrix closure too large for a unit test")
    assert is_empty_S(a) == expected


@settings(max_examples=80)
@given(counter_automata("S"))
def test_emptiness_against_cutoffs(a):
    if not is_empty_S(a):
        # unbounded values: a word above any threshold exists
        assert not nfa_is_empty(cutoff_S(a, 2))
    if nfa_is_empty(cutoff_S(a, 1)):
        assert is_empty_S(a)


def test_intersection_and_kinds():
    with pytest.raises(ValueError):
        intersect_T(T(fig2()), T(cnt1()))
    assert is_empty(intersect_T(T(fig2()), T(single_increment())))
    assert not is_disjoint_T(T(fig2()), T(fig2()))


def test_union_of_parts():
    parts = [T(letter_counter("a")), T(letter_counter("b"))]
    u = union_automaton(parts)
    for w in ["aaa", "bb", "ab", ""]:
        assert value_S(u, w) == max(value_S(p.automaton, w) for p in parts)
    assert not is_empty_union(parts)
    assert is_empty_union([T(no_accepting_run())])
    with pytest.raises(ValueError):
        union_automaton([])


def _check_B(m1, m2, k):
    assert is_empty(restrict_profinite(m1, nfa_complement(k)))
    assert is_empty(restrict_profinite(m2, k))


def _check_S(m1, m2, r):
    assert is_empty_S(restrict_profinite(m1, nfa_complement(r)))
    assert is_empty_S(restrict_profinite(m2, r))


@pytest.mark.parametrize("name", sorted(b_pairs()))
def test_separator_B_catalog(name):
    a1, a2 = b_pairs()[name]
    k = separator_B(T(a1), T(a2))
    _check_B(T(a1), T(a2), k)


@pytest.mark.parametrize("name", sorted(s_pairs()))
def test_separator_S_catalog(name):
    a1, a2 = s_pairs()[name]
    r, n0 = separator_S(T(a1), T(a2))
    _check_S(T(a1), T(a2), r)
    assert n0 >= 0


def test_worked_example_has_n0_zero():
    r, n0 = separator_S(T(letter_counter("a")), T(letter_counter("b")))
    assert n0 == 0
    # the separator excludes exactly the words with a positive count of b
    assert shortest_word(nfa_complement(r)) == ("b",)


def test_threshold_above_zero():
    _, n0 = separator_S(T(fig2()), T(single_increment()))
    assert n0 == 1


def test_separators_of_unions():
    m1 = [T(letter_counter("a")), T(no_accepting_run())]
    m2 = [T(letter_counter("b")), T(single_increment())]
    r, _ = separator_S(m1, m2)
    for p in m1:
        assert is_empty_S(restrict_profinite(p, nfa_complement(r)))
    for p in m2:
        assert is_empty_S(restrict_profinite(p, r))
    k, n0 = separator_T(T(cnt1()), [], "B", AB)
    assert n0 is None and nfa_equivalent(k, strip(cnt1()))
    assert nfa_is_empty(separator_B([], [T(cnt1())], AB))
    with pytest.raises(ValueError):
        separator_B([], [T(cnt1())])


def test_overlap_is_reported_with_a_witness():
    with pytest.raises(NotDisjoint) as exc:
        separator_S(T(fig2()), T(letter_counter("a")))
    w = exc.value.witness
    assert value_S(fig2(), w) > 1 and value_S(letter_counter("a"), w) > 1
    with pytest.raises(NotDisjoint):
        separator_B(T(cnt1()), T(cnt1()))
