"""For omega-B automata the Büchi closure already separates.

Dropping the boundedness requirement leaves "every counter is reset
infinitely often", a Büchi condition.  On ultimately periodic words the
closure and the original automaton agree.
"""
from omegasep.fixtures import a_omega, fig1
from omegasep.harness import up_grid
from omegasep.omega import buchi_up_membership, closure_automaton, separator_omega_direct, up_membership

a = fig1()
c = closure_automaton(a)
print("closure states:", c.states)
print("direct separator is the closure:", separator_omega_direct(a, a_omega()) == c)

grid = up_grid(a.alphabet, 2, 3)
agree = sum(buchi_up_membership(c, u) == up_membership(a, u) for u in grid)
print(f"agreement on {len(grid)} ultimately periodic words: {agree}")
