"""An omega-B separator with its certificate, checked by the verifier.

FIG1 accepts words where a-blocks stay bounded; a^omega is one long
a-block, so the two languages are disjoint.
"""
import json

from omegasep.automata import UPWord
from omegasep.fixtures import a_omega, fig1
from omegasep.harness import verify_separation
from omegasep.omega import buchi_up_membership, separator_omega

a1, a2 = fig1(), a_omega()
sep, cert = separator_omega(a1, a2)
print(f"separator: {len(sep.states)} states, {len(cert.pairs)} type pairs in the certificate")

for u in [UPWord((), "ab"), UPWord((), "b"), UPWord("b", "a"), UPWord((), "a")]:
    print(f"{str(u):10} in separator: {buchi_up_membership(sep, u)}")

report = verify_separation(a1, a2, sep, cert, grid=(2, 3))
print(json.dumps(report.to_dict(timings=False), indent=2))
