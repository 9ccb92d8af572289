from __future__ import annotations

import os

from hypothesis import HealthCheck, settings, strategies as st

from omegasep.automata import CounterAutomaton, Kind, Op, Transition, UPWord

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.register_profile("thorough", deadline=None, max_examples=400,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

AB = ("a", "b")

words = st.lists(st.sampled_from(AB), max_size=6).map(tuple)
up_words = st.builds(UPWord, st.lists(st.sampled_from(AB), max_size=3).map(tuple),
                     st.lists(st.sampled_from(AB), min_size=1, max_size=3).map(tuple))


@st.composite
def counter_automata(draw, kind: Kind | str, max_states: int = 3, max_counters: int = 2,
                     eps: bool = True) -> CounterAutomaton:
    """Small automata; epsilon moves only go forward, so they never cycle."""
    kind = Kind(kind)
    n = draw(st.integers(1, max_states))
    k = draw(st.integers(0 if max_counters == 0 else 1, max_counters))
    states = tuple(f"q{i}" for i in range(n))
    counters = tuple(f"c{i}" for i in range(k))
    ops = st.tuples(*[st.sampled_from(list(Op))] * k)
    trans = []
    for i in range(n):
        for j in range(n):
            for a in AB:
                if draw(st.booleans()):
                    trans.append(Transition(states[i], a, states[j], draw(ops)))
            if eps and i < j and draw(st.integers(0, 5)) == 0:
                trans.append(Transition(states[i], None, states[j], draw(ops)))
    finals = None
    if not kind.is_omega:
        finals = frozenset(q for q in states if draw(st.booleans())) or frozenset({states[-1]})
    return CounterAutomaton(kind, AB, states, frozenset({states[0]}), counters, tuple(trans), finals)


# criterion number -> PASS/FAIL line, filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
