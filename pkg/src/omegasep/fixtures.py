"""Named automata used by tests, demos and the CLI.

Each fixture carries a note saying where it comes from or why its language
is what it is claimed to be.
"""
from __future__ import annotations

from dataclasses import dataclass

from .automata import BuchiAutomaton, CounterAutomaton, Kind, Op, Transition, validate
from .profinite import counter_product
from .regular import nfa_from_regex

NIL, INC, RST = Op.NIL, Op.INC, Op.RESET
AB = ("a", "b")


@dataclass(frozen=True)
class Fixture:
    name: str
    automaton: object
    provenance: str

    def __post_init__(self):
        if not self.provenance:
            raise ValueError("a fixture needs a provenance note")
        problems = validate(self.automaton)
        if problems:
            raise ValueError(f"fixture {self.name} is malformed: {problems}")


def _ca(kind, states, initial, counters, trans, finals=None, alphabet=AB) -> CounterAutomaton:
    return CounterAutomaton(Kind(kind), alphabet, tuple(states), frozenset(initial), tuple(counters),
                            tuple(Transition(s, l, d, tuple(o)) for s, l, d, o in trans),
                            None if finals is None else frozenset(finals))


# -- finite-word automata ---------------------------------------------------

def fig2() -> CounterAutomaton:
    """S-automaton whose value on a word is its number of a's."""
    return _ca("S", ["qI", "qF"], ["qI"], ["c"], [
        ("qI", "a", "qI", [INC]),
        ("qI", "b", "qI", [NIL]),
        ("qI", None, "qF", [RST]),
    ], finals=["qF"])


def cnt1() -> CounterAutomaton:
    """One state, initial and final; a increments, b resets.  B-value is the
    longest a-block that is followed by a b."""
    return _ca("B", ["q"], ["q"], ["c"], [("q", "a", "q", [INC]), ("q", "b", "q", [RST])], finals=["q"])


def letter_counter(letter: str, kind: str = "S") -> CounterAutomaton:
    """Reads only ``letter``, counting it, then resets by an epsilon move:
    value = length on ``letter*`` and no run elsewhere."""
    return _ca(kind, ["qI", "qF"], ["qI"], ["c"], [
        ("qI", letter, "qI", [INC]),
        ("qI", None, "qF", [RST]),
    ], finals=["qF"])


def a1only() -> CounterAutomaton:
    return letter_counter("a")


def b1only() -> CounterAutomaton:
    return letter_counter("b")


def single_increment() -> CounterAutomaton:
    """S-automaton incrementing at most once per word; values are 0 or 1."""
    return _ca("S", ["q0", "q1", "qF"], ["q0"], ["c"], [
        ("q0", "b", "q0", [NIL]),
        ("q0", "a", "q1", [INC]),
        ("q1", "a", "q1", [NIL]),
        ("q1", "b", "q1", [NIL]),
        ("q0", None, "qF", [RST]),
        ("q1", None, "qF", [RST]),
    ], finals=["qF"])


def no_accepting_run(kind: str = "S") -> CounterAutomaton:
    return _ca(kind, ["q0", "qF"], ["q0"], ["c"], [
        ("q0", "a", "q0", [INC]),
        ("q0", "b", "q0", [RST]),
    ], finals=["qF"])


def count_with_few(counted: str, other: str) -> CounterAutomaton:
    """S: counts ``counted`` on words with at most one ``other``."""
    return _ca("S", ["p0", "p1", "qF"], ["p0"], ["c"], [
        ("p0", counted, "p0", [INC]),
        ("p1", counted, "p1", [INC]),
        ("p0", other, "p1", [NIL]),
        ("p0", None, "qF", [RST]),
        ("p1", None, "qF", [RST]),
    ], finals=["qF"])


def two_counter_s() -> CounterAutomaton:
    """S with two counters: value = min(#a, #b) on words a^n b^m."""
    return _ca("S", ["pa", "pb", "qF"], ["pa"], ["x", "y"], [
        ("pa", "a", "pa", [INC, NIL]),
        ("pa", "b", "pb", [NIL, INC]),
        ("pb", "b", "pb", [NIL, INC]),
        ("pb", None, "qF", [RST, RST]),
    ], finals=["qF"])


def b_blocks(letter: str, other: str) -> CounterAutomaton:
    """B: largest ``letter``-block on words that start with ``letter``."""
    return _ca("B", ["s", "q", "f"], ["s"], ["c"], [
        ("s", letter, "q", [INC]),
        ("q", letter, "q", [INC]),
        ("q", other, "q", [RST]),
        ("q", None, "f", [RST]),
    ], finals=["f"])


# -- omega automata ---------------------------------------------------------

def fig1(kind: str = "wB") -> CounterAutomaton:
    """The two-state automaton measuring a-blocks between b's."""
    return _ca(kind, ["qI", "qM"], ["qI"], ["c"], [
        ("qI", "a", "qI", [NIL]),
        ("qI", "b", "qI", [NIL]),
        ("qI", "b", "qM", [NIL]),
        ("qM", "a", "qM", [INC]),
        ("qM", "b", "qI", [RST]),
    ])


def a_omega(kind: str = "wB") -> CounterAutomaton:
    """Counterless single a-loop: exactly a^omega."""
    return _ca(kind, ["q"], ["q"], [], [("q", "a", "q", [])])


def ab_omega(kind: str = "wB") -> CounterAutomaton:
    """Counterless cycle: exactly (ab)^omega."""
    return _ca(kind, ["p", "q"], ["p"], [], [("p", "a", "q", []), ("q", "b", "p", [])])


def eventually(letter: str, kind: str = "wB") -> CounterAutomaton:
    """wB for Sigma* letter^omega: only the final loop resets.  Read as wS
    every reset value is 0, so use :func:`eventually_s` there."""
    return _ca(kind, ["q0", "q1"], ["q0"], ["c"], [
        ("q0", "a", "q0", [NIL]),
        ("q0", "b", "q0", [NIL]),
        ("q0", letter, "q1", [NIL]),
        ("q1", letter, "q1", [RST]),
    ])


def eventually_s(letter: str) -> CounterAutomaton:
    """wS for Sigma* letter^omega: the final loop increments and may reset,
    so resets can be spaced out arbitrarily."""
    return _ca("wS", ["q0", "q1"], ["q0"], ["c"], [
        ("q0", "a", "q0", [NIL]),
        ("q0", "b", "q0", [NIL]),
        ("q0", letter, "q1", [NIL]),
        ("q1", letter, "q1", [INC]),
        ("q1", letter, "q1", [RST]),
    ])


def infinitely_many(letter: str, other: str) -> CounterAutomaton:
    """wB: infinitely many ``letter``; it resets, ``other`` does nothing."""
    return _ca("wB", ["q"], ["q"], ["c"], [("q", letter, "q", [RST]), ("q", other, "q", [NIL])])


def blocks(kind: str) -> CounterAutomaton:
    """One state; a increments, b resets.  wB: infinitely many b and
    bounded a-blocks.  wS: a-blocks between b's tend to infinity."""
    return _ca(kind, ["q"], ["q"], ["c"], [("q", "a", "q", [INC]), ("q", "b", "q", [RST])])


def resets_without_increments() -> CounterAutomaton:
    """wS whose reset values are always 0: empty language."""
    return _ca("wS", ["q"], ["q"], ["c"], [("q", "a", "q", [RST]), ("q", "b", "q", [NIL])])


def never_reset(kind: str = "wB") -> CounterAutomaton:
    """Every cycle lacks a reset: empty language."""
    return _ca(kind, ["q0", "q1"], ["q0"], ["c"], [
        ("q0", "a", "q0", [INC]),
        ("q0", "b", "q1", [RST]),
        ("q1", "a", "q1", [NIL]),
        ("q1", "b", "q1", [INC]),
    ])


def inf_a_reference() -> BuchiAutomaton:
    """Deterministic Büchi automaton for 'infinitely many a'."""
    return BuchiAutomaton(AB, ("sa", "sb"), frozenset({"sb"}), (
        Transition("sa", "a", "sa"), Transition("sa", "b", "sb"),
        Transition("sb", "a", "sa"), Transition("sb", "b", "sb"),
    ), (frozenset({"sa"}),))


def buchi_eventually(letter: str) -> BuchiAutomaton:
    return BuchiAutomaton(AB, ("q0", "q1"), frozenset({"q0"}), (
        Transition("q0", "a", "q0"), Transition("q0", "b", "q0"),
        Transition("q0", letter, "q1"), Transition("q1", letter, "q1"),
    ), (frozenset({"q1"}),))


def buchi_ab_omega() -> BuchiAutomaton:
    return BuchiAutomaton(AB, ("p", "q"), frozenset({"p"}), (
        Transition("p", "a", "q"), Transition("q", "b", "p"),
    ), (frozenset({"p", "q"}),))


def catalog() -> dict[str, Fixture]:
    items = [
        Fixture("FIG1", fig1("wB"), "standard example: guesses an a-block between b's and measures it"),
        Fixture("FIG1_S", fig1("wS"), "the FIG1 automaton read as omega-S"),
        Fixture("FIG2", fig2(), "standard example: counts a's, then an epsilon reset ends the word"),
        Fixture("CNT1", cnt1(), "hand-built: a inc, b reset, one accepting state"),
        Fixture("A1ONLY", a1only(), "hand-built: counts a's on a*"),
        Fixture("B1ONLY", b1only(), "hand-built: counts b's on b*"),
        Fixture("SINGLE_INC", single_increment(), "hand-built: values at most 1"),
        Fixture("NOACC", no_accepting_run(), "hand-built: final state unreachable"),
        Fixture("TWO_COUNTER", two_counter_s(), "hand-built: min(#a, #b) on a^n b^m"),
        Fixture("A_OMEGA", a_omega(), "hand-built: the single word a^omega"),
        Fixture("AB_OMEGA", ab_omega(), "hand-built: the single word (ab)^omega"),
        Fixture("EVENTUALLY_A", eventually("a"), "hand-built: Sigma* a^omega"),
        Fixture("EVENTUALLY_B", eventually("b"), "hand-built: Sigma* b^omega"),
        Fixture("INF_A", infinitely_many("a", "b"), "hand-built: infinitely many a"),
        Fixture("BLOCKS_B", blocks("wB"), "hand-built: bounded a-blocks, infinitely many b"),
        Fixture("BLOCKS_S", blocks("wS"), "hand-built: a-blocks tending to infinity"),
        Fixture("NEVER_RESET", never_reset(), "hand-built: no cycle resets, empty"),
        Fixture("ZERO_RESETS_S", resets_without_increments(), "hand-built: reset values stay 0, empty"),
    ]
    return {f.name: f for f in items}


# -- disjoint pairs -----------------------------------------------------------

def within(a: CounterAutomaton, regex: str) -> CounterAutomaton:
    """``a`` restricted to the words of ``regex``; values are unchanged there."""
    return counter_product(a, nfa_from_regex(regex, a.alphabet))


ANY = "(a|b)"


def b_pairs() -> dict[str, tuple[CounterAutomaton, CounterAutomaton]]:
    """Disjoint B-pairs.  For B-automata disjointness is disjointness of the
    underlying regular languages, so most pairs split a regular partition."""
    c = cnt1()
    return {
        "BLOCKS_A/BLOCKS_B": (b_blocks("a", "b"), b_blocks("b", "a")),
        "CNT1_A*/CNT1_HAS_B": (within(c, "a*"), within(c, f"{ANY}*b{ANY}*")),
        "CNT1_EVEN/CNT1_ODD": (within(c, f"({ANY}{ANY})*"), within(c, f"{ANY}({ANY}{ANY})*")),
        "A1ONLY_B/B_PLUS": (letter_counter("a", "B"), within(letter_counter("b", "B"), "b+")),
        "NOACC_B/CNT1": (no_accepting_run("B"), c),
        "CNT1_AA/CNT1_NO_AA": (within(c, f"{ANY}*aa{ANY}*"), within(c, "(b|ab)*a?")),
        "BLOCKS_A/CNT1_B*": (b_blocks("a", "b"), within(c, "b*")),
        "CNT1_ENDS_A/CNT1_ENDS_B": (within(c, f"{ANY}*a"), within(c, f"({ANY}*b)?")),
        "CNT1_AB/CNT1_BA": (within(c, f"a{ANY}*b"), within(c, f"b{ANY}*a")),
        "BLOCKS_B/CNT1_A+": (b_blocks("b", "a"), within(c, "a+")),
        "CNT1_LEN3/CNT1_NOT3": (within(c, f"{ANY}{ANY}{ANY}"), within(c, f"({ANY}?{ANY}?|{ANY}{ANY}{ANY}{ANY}+)")),
    }


def s_pairs() -> dict[str, tuple[CounterAutomaton, CounterAutomaton]]:
    """Disjoint S-pairs.  Several overlap as word languages but have no
    common words of unbounded value in both automata at once."""
    f2 = fig2()
    return {
        "A1ONLY/B1ONLY": (a1only(), b1only()),
        "FIG2/NOACC": (f2, no_accepting_run()),
        "SINGLE_INC/FIG2": (single_increment(), f2),
        "FIG2/SINGLE_INC": (f2, single_increment()),
        "FEW_B/FEW_A": (count_with_few("a", "b"), count_with_few("b", "a")),
        "TWO_COUNTER/B1ONLY": (two_counter_s(), b1only()),
        "A1ONLY/TWO_COUNTER": (a1only(), two_counter_s()),
        "FIG2_A+/FIG2_STARTS_B": (within(f2, "a+"), within(f2, f"b{ANY}*")),
        "FEW_B/B1ONLY": (count_with_few("a", "b"), b1only()),
        "FIG2_ODD/FIG2_EVEN": (within(f2, f"{ANY}({ANY}{ANY})*"), within(f2, f"({ANY}{ANY})*")),
        "TWO_COUNTER/FEW_A": (two_counter_s(), count_with_few("b", "a")),
    }


def _from_buchi(b: BuchiAutomaton, kind: str) -> CounterAutomaton:
    from .omega import buchi_to_omegaT

    return buchi_to_omegaT(b, kind)


def omega_pairs(kind: str) -> dict[str, tuple[CounterAutomaton, CounterAutomaton]]:
    """Disjoint omega pairs of the given kind (``"wB"`` or ``"wS"``)."""
    if Kind(kind) is Kind.WB:
        return {
            "FIG1/A_OMEGA": (fig1(), a_omega()),
            "INF_A/EVENTUALLY_B": (infinitely_many("a", "b"), eventually("b")),
            "BLOCKS_B/A_OMEGA": (blocks("wB"), a_omega()),
            "FIG1/EVENTUALLY_A": (fig1(), eventually("a")),
            "AB_OMEGA/EVENTUALLY_B": (ab_omega(), eventually("b")),
            "BUCHI_AB/EVENTUALLY_A": (_from_buchi(buchi_ab_omega(), "wB"), eventually("a")),
            "NEVER_RESET/FIG1": (never_reset(), fig1()),
        }
    return {
        "FIG1_S/A_OMEGA": (fig1("wS"), a_omega("wS")),
        "BLOCKS_S/EVENTUALLY_A": (blocks("wS"), eventually_s("a")),
        "BLOCKS_S/EVENTUALLY_B": (blocks("wS"), eventually_s("b")),
        "AB_OMEGA/BLOCKS_S": (ab_omega("wS"), blocks("wS")),
        "EVENTUALLY_A/EVENTUALLY_B": (eventually_s("a"), eventually_s("b")),
        "ZERO_RESETS/BLOCKS_S": (resets_without_increments(), blocks("wS")),
        "BUCHI_EVENTUALLY_A/AB_OMEGA": (_from_buchi(buchi_eventually("a"), "wS"), ab_omega("wS")),
    }


def complementary_pair() -> tuple[CounterAutomaton, CounterAutomaton, BuchiAutomaton]:
    """``(A_L, A_Lc, reference)``: infinitely many a, finitely many a, and a
    deterministic Büchi automaton for the first."""
    return infinitely_many("a", "b"), eventually("b"), inf_a_reference()
