"""Counting a's with an S-automaton, then reading off the cutoff languages.

Run with ``python demos/values_and_cutoffs.py``.
"""
from omegasep.fixtures import fig2
from omegasep.regular import nfa_member, shortest_word, words_upto
from omegasep.words import cutoff_S, value_S

a = fig2()
print("automaton:", a.states, "counters:", a.counters)

# every word gets its number of a's as value
for w in ["", "b", "ab", "aab", "abab", "aaab"]:
    print(f"value_S({w!r:8}) = {value_S(a, w)}")

# the cutoff {w : value > n} is an ordinary NFA
for n in range(3):
    c = cutoff_S(a, n)
    members = ["".join(w) for w in words_upto(a.alphabet, 3) if nfa_member(c, w)]
    print(f"n = {n}: shortest member {''.join(shortest_word(c))!r}, "
          f"{len(members)} members of length <= 3")
