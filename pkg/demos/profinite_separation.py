"""Separating two S-automata by a regular language.

A1ONLY counts a's on words over {a}, B1ONLY counts b's on words over {b}.
Both are unbounded, so neither cutoff language is finite, yet a regular
separator exists and the threshold n0 is 0.
"""
from omegasep.fixtures import a1only, b1only
from omegasep.profinite import TRegularProfinite, is_empty_S, restrict_profinite, separator_S
from omegasep.regular import nfa_complement, nfa_member

m1, m2 = TRegularProfinite(a1only()), TRegularProfinite(b1only())
r, n0 = separator_S(m1, m2)
print("threshold n0 =", n0)
for w in ["a", "aaa", "b", "bb", "ab"]:
    print(f"{w!r:6} in separator: {nfa_member(r, w)}")

# the two emptiness checks that make r a separator
print("M1 outside r is empty:", is_empty_S(restrict_profinite(m1, nfa_complement(r))))
print("M2 inside r is empty: ", is_empty_S(restrict_profinite(m2, r)))
