import pytest
from hypothesis import given, settings, strategies as st

from omegasep.automata import UPWord
from omegasep.fixtures import blocks, catalog, cnt1, eventually_s, fig1, fig2
from omegasep.harness import up_grid
from omegasep.monoid import LinkedPair, h_image, linked_pairs, transition_monoid, up_decomposition
from omegasep.omega import up_membership
from omegasep.profinite import is_empty, restrict_profinite
from omegasep.reduction import (EndType, all_taus, build_A_q, build_A_q_tau, build_M_t, check_linked, degenerate,
                                end_type, monoid_dfa)
from omegasep.regular import nfa_member, word_nfa, words_upto
from omegasep.words import runs, value_B, value_S

from conftest import AB, counter_automata

L, R = EndType.LEFT, EndType.RIGHT
LOOP = LinkedPair(2, 2)  # FIG1: h(bb), idempotent


def _run(a, w):
    (r,) = runs(a, w)
    return r


def test_end_types_on_cnt1():
    r = _run(cnt1(), "aaab")
    assert end_type(r, "c", 0) is R
    # no reset before the cut counts as zero increments on the left
    assert end_type(r, "c", 2) is R
    assert end_type(r, "c", 4) is L
    assert str(L) == "←"


def test_end_type_between_resets():
    # ties go left; cut 0 sees no increments on either side
    r = _run(cnt1(), "baaabab")
    assert [end_type(r, "c", k).value for k in range(8)] == ["←", "→", "→", "←", "←", "→", "←", "←"]


def test_end_type_errors():
    r = _run(cnt1(), "ab")
    with pytest.raises(KeyError):
        end_type(r, "d", 0)
    with pytest.raises(IndexError):
        end_type(r, "c", 3)


@settings(max_examples=40)
@given(counter_automata("wB"))
def test_monoid_dfa_recognises_preimages(a):
    m = transition_monoid(a)
    for e in m.idempotents():
        d = monoid_dfa(m, e)
        assert d.is_deterministic
        for w in words_upto(AB, 4):
            assert nfa_member(d, w) == (h_image(m, w) == e)


def test_linked_pair_validation():
    m = transition_monoid(fig1())
    check_linked(m, LOOP)
    with pytest.raises(ValueError):
        check_linked(m, LinkedPair(1, 1))
    with pytest.raises(ValueError):
        check_linked(m, LinkedPair(0, 9))
    with pytest.raises(ValueError):
        build_A_q(fig1("wS"), LOOP, "qI")
    with pytest.raises(KeyError):
        build_A_q(fig1(), LOOP, "nowhere")
    with pytest.raises(ValueError):
        build_M_t(fig2(), LinkedPair(0, 0))


def test_full_A_q_size():
    part = build_A_q(fig1(), LOOP, "qI", trim=False)
    # every (state, monoid element, reset flags) triple plus the final sink
    assert len(part.automaton.states) == 2 * 3 * 2 + 1
    assert not is_empty(part)


def test_degenerate_parts():
    m = transition_monoid(fig1())
    assert not degenerate(fig1(), m, LOOP, "qI")
    # s = h(a) is the identity, so the initial state never reaches qM
    assert degenerate(fig1(), m, LinkedPair(0, 0), "qM")
    assert is_empty(build_A_q(fig1(), LinkedPair(0, 0), "qM"))
    # a^n maps to the identity but never resets the counter
    assert is_empty(build_A_q(fig1(), LinkedPair(0, 0), "qI"))


def test_A_q_values_on_fig1():
    part = build_A_q(fig1(), LOOP, "qI").automaton
    # loops on qI through qM: the value is the a-block measured
    assert value_B(part, "baab") == 2
    assert value_B(part, "bb") == 0
    assert value_B(part, "ab") == float("inf")


def test_tau_examples_on_fig1_as_omega_S():
    a = fig1("wS")
    right_at_i = build_A_q_tau(a, LOOP, "qI", (R,)).automaton
    left_at_m = build_A_q_tau(a, LOOP, "qM", (L,)).automaton
    for n in range(5):
        assert value_S(right_at_i, "b" + "a" * n + "b") == n
        assert value_S(left_at_m, "bb" + "a" * n) == n
    assert all(value_S(build_A_q_tau(a, LOOP, "qI", (L,)).automaton, "a" * n + "b") == 0 for n in range(5))


def test_tau_arguments():
    a = fig1("wS")
    with pytest.raises(ValueError):
        build_A_q_tau(a, LOOP, "qI", None)
    with pytest.raises(ValueError):
        build_A_q_tau(a, LOOP, "qI", (L, R))
    by_name = build_A_q_tau(a, LOOP, "qI", {"c": "→"})
    assert by_name == build_A_q_tau(a, LOOP, "qI", (R,))
    assert all_taus(blocks("wS")) == [(L,), (R,)]


def test_M_t_examples():
    period = word_nfa("abab", AB, plus=True)
    assert build_M_t(fig1("wS"), LOOP, within=period).is_empty()
    assert not build_M_t(fig1(), LOOP, within=period).is_empty()
    mt = build_M_t(eventually_s("a"), linked_pairs(transition_monoid(eventually_s("a")))[-1])
    assert len(mt.parts) == len(mt.index) and all(tau is not None for _, tau in mt.index)


def _omega_catalog():
    return [f for f in catalog().values() if getattr(f.automaton, "kind", None) is not None
            and f.automaton.kind.is_omega]


@pytest.mark.parametrize("fixture", _omega_catalog(), ids=lambda f: f.name)
def test_reduction_equivalence_on_up_words(fixture):
    a = fixture.automaton
    m = transition_monoid(a)
    for u in up_grid(AB, 2, 2):
        d = up_decomposition(u, m)
        mt = build_M_t(a, d.pair)
        block = word_nfa(d.block, AB, plus=True)
        via_parts = any(not is_empty(restrict_profinite(p, block)) for p in mt.parts)
        assert via_parts == up_membership(a, u, "product"), str(u)


@settings(max_examples=25)
@given(counter_automata("wB", max_states=2, max_counters=1), st.sampled_from(up_grid(AB, 1, 2)))
def test_reduction_equivalence_random(a, u):
    m = transition_monoid(a)
    d = up_decomposition(u, m)
    block = word_nfa(d.block, AB, plus=True)
    via_parts = any(not is_empty(restrict_profinite(p, block)) for p in build_M_t(a, d.pair).parts)
    assert via_parts == up_membership(a, u, "product")


def test_fig1_verdicts_by_reduction():
    assert up_membership(fig1(), UPWord((), "ab"))
    assert not up_membership(fig1("wS"), UPWord((), "ab"))
