"""Random automata, ultimately periodic word grids, independent oracles and
verification reports."""
from __future__ import annotations

import itertools
import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterator, Sequence

import networkx as nx

from .automata import (BuchiAutomaton, CounterAutomaton, Kind, Op, Transition, UPWord, product_safety,
                       restrict_states, strip, up_safety)
from .omega import (SeparatorCertificate, automaton_hash, buchi_to_omegaT, buchi_up_membership,
                    find_up_witness, intersect_omegaT, omega_is_empty, up_membership)
from .profinite import TRegularProfinite, is_empty_S, restrict_profinite
from .regular import (disjoint_union, nfa_complement, nfa_equivalent, nfa_intersect, nfa_is_empty,
                      shortest_word, words_upto)
from .words import cutoff_S, value_S

AB = ("a", "b")


# ---------------------------------------------------------------------------
# random automata

def random_automaton(rng: random.Random | int, kind: Kind | str, max_states: int = 4, max_counters: int = 2,
                     density: float = 0.5, alphabet: Sequence[str] = AB, eps_prob: float = 0.15,
                     n_states: int | None = None, n_counters: int | None = None) -> CounterAutomaton:
    """Seeded random counter automaton.

    Every (state, letter, state) triple becomes a transition with
    probability ``density``; epsilon moves only go from a state to a later
    one, which keeps the epsilon graph acyclic.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    kind = Kind(kind)
    n = n_states if n_states is not None else rng.randint(1, max_states)
    k = n_counters if n_counters is not None else rng.randint(1 if max_counters else 0, max_counters)
    states = tuple(f"q{i}" for i in range(n))
    counters = tuple(f"c{i}" for i in range(k))
    ops = list(Op)
    trans = []
    for i, j in itertools.product(range(n), repeat=2):
        for a in alphabet:
            if rng.random() < density:
                trans.append(Transition(states[i], a, states[j], tuple(rng.choice(ops) for _ in counters)))
        if i < j and rng.random() < eps_prob:
            trans.append(Transition(states[i], None, states[j], tuple(rng.choice(ops) for _ in counters)))
    initial = frozenset({states[0]})
    finals = None
    if not kind.is_omega:
        finals = frozenset(q for q in states if rng.random() < 0.4) or frozenset({states[-1]})
    return CounterAutomaton(kind, tuple(alphabet), states, initial, counters, tuple(trans), finals)


def random_buchi(rng: random.Random | int, max_states: int = 3, density: float = 0.5,
                 alphabet: Sequence[str] = AB) -> BuchiAutomaton:
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    n = rng.randint(1, max_states)
    states = tuple(f"b{i}" for i in range(n))
    trans = tuple(Transition(p, a, q) for p in states for a in alphabet for q in states if rng.random() < density)
    acc = frozenset(q for q in states if rng.random() < 0.5) or frozenset({states[-1]})
    return BuchiAutomaton(tuple(alphabet), states, frozenset({states[0]}), trans, (acc,))


# ---------------------------------------------------------------------------
# ultimately periodic words

def up_grid(alphabet: Sequence[str] = AB, px: int = 3, py: int = 4) -> list[UPWord]:
    """Every ``x.y^omega`` with ``|x| <= px`` and ``1 <= |y| <= py``."""
    out = []
    for x in words_upto(alphabet, px):
        for ly in range(1, py + 1):
            for y in itertools.product(alphabet, repeat=ly):
                out.append(UPWord(x, y))
    return out


GRID_BUDGET = 20_000


def sample_up_members(a: CounterAutomaton, px: int = 3, py: int = 4, route: str = "reduction",
                      budget: int = GRID_BUDGET) -> list[UPWord]:
    grid = up_grid(a.alphabet, px, py)
    if len(grid) > budget:
        raise ValueError(f"grid of {len(grid)} words exceeds the budget {budget}")
    return [u for u in grid if up_membership(a, u, route)]


def random_up_words(rng: random.Random | int, count: int, alphabet: Sequence[str] = AB,
                    max_prefix: int = 3, max_period: int = 4) -> list[UPWord]:
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    out = []
    for _ in range(count):
        x = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_prefix)))
        y = tuple(rng.choice(alphabet) for _ in range(rng.randint(1, max_period)))
        out.append(UPWord(x, y))
    return out


# ---------------------------------------------------------------------------
# oracles

def wB_lasso_oracle(a: CounterAutomaton, u: UPWord) -> bool:
    """Membership of ``u`` in an omega-B language by a lasso search.

    On an ultimately periodic run counters stay bounded, so ``u`` is
    accepted iff the product with ``u``'s safety automaton has a reachable
    cycle that resets every counter.  Looks at strongly connected components
    of the product's state graph and the resets on their internal edges.
    """
    if a.kind is not Kind.WB:
        raise ValueError("the lasso oracle is for omega-B automata")
    p = product_safety(a, up_safety(u, a.alphabet))
    g = nx.MultiDiGraph()
    g.add_nodes_from(p.states)
    for t in p.transitions:
        g.add_edge(t.src, t.dst, resets=frozenset(c for c, o in zip(p.counters, t.ops) if o is Op.RESET))
    reach = set()
    for q in p.initial:
        reach |= nx.descendants(g, q) | {q}
    sub = g.subgraph(reach)
    for comp in nx.strongly_connected_components(sub):
        inner = [d["resets"] for s, t, d in sub.edges(data=True) if s in comp and t in comp]
        if not inner:
            continue
        if set(p.counters) <= set().union(*inner):
            return True
    return False


def growth_probe(a: CounterAutomaton, n_max: int = 3, max_length: int | None = None) -> list[tuple[int, int]]:
    """``(n, length of a shortest word with value > n)`` for ``n = 0, 1, ...``
    up to ``n_max``, stopping at the first ``n`` without such a word (or
    whose shortest word is longer than ``max_length``)."""
    out = []
    for n in range(n_max + 1):
        w = shortest_word(cutoff_S(a, n))
        if w is None or (max_length is not None and len(w) > max_length):
            break
        out.append((n, len(w)))
    return out


def growth_length_bound(a: CounterAutomaton, n: int) -> int:
    return n * len(a.states) * (len(a.counters) + 1) + len(a.states)


def max_value(a: CounterAutomaton, length: int) -> float:
    return max(value_S(a, w) for w in words_upto(a.alphabet, length))


def growth_consistency(a: CounterAutomaton, n_max: int = 3) -> tuple[bool, str]:
    """Cross-check ``is_empty_S`` against the growth of values.

    Non-empty: every ``n <= n_max`` has a word of value above ``n`` within
    the length bound.  Empty: the largest value over words up to length 8
    is already reached by words up to length 6.
    """
    empty = is_empty_S(a)
    if not empty:
        probe = dict(growth_probe(a, n_max))
        for n in range(n_max + 1):
            bound = growth_length_bound(a, n)
            if n not in probe or probe[n] > bound:
                return False, f"non-empty verdict but no word of value > {n} within length {bound}"
        return True, "non-empty, values grow"
    m6, m8 = max_value(a, 6), max_value(a, 8)
    if m6 != m8 or m8 == math.inf:
        return False, f"empty verdict but values keep growing ({m6} up to length 6, {m8} up to 8)"
    return True, f"empty, values stabilise at {m8}"


# ---------------------------------------------------------------------------
# verification reports

@dataclass
class CheckResult:
    name: str
    ok: bool
    count: int = 0
    counterexample: str | None = None
    seconds: float = 0.0
    detail: str = ""


@dataclass
class VerificationReport:
    inputs: dict
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self, timings: bool = True) -> dict:
        checks = []
        for c in self.checks:
            d = asdict(c)
            if not timings:
                d.pop("seconds")
            checks.append(d)
        return {"inputs": self.inputs, "ok": self.ok, "checks": checks}

    def _run(self, name: str, fn: Callable[[], tuple[bool, int, str | None, str]]) -> CheckResult:
        res = _timed(name, fn)
        self.checks.append(res)
        return res

    def run_all(self, checks: Sequence[tuple[str, Callable]], workers: int = 4) -> None:
        """Run independent checks concurrently; results keep the given order."""
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            futures = [pool.submit(_timed, name, fn) for name, fn in checks]
            self.checks.extend(f.result() for f in futures)


def _timed(name: str, fn: Callable[[], tuple[bool, int, str | None, str]]) -> CheckResult:
    start = time.perf_counter()
    try:
        ok, count, cex, detail = fn()
    except Exception as exc:  # a crashing check is a failed check
        ok, count, cex, detail = False, 0, None, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, ok, count, cex, time.perf_counter() - start, detail)


def _components(sep: BuchiAutomaton) -> list[BuchiAutomaton]:
    out = []
    for q in sorted(sep.initial):
        b = BuchiAutomaton(sep.alphabet, sep.states, frozenset({q}), sep.transitions, sep.acceptance)
        keep = b.reachable()
        out.append(restrict_states(b, keep))
    return out


def disjoint_side(a2: CounterAutomaton, sep: BuchiAutomaton) -> tuple[bool, str | None]:
    """Exact check that ``L(a2)`` and ``L(sep)`` are disjoint, component by
    component of the separator."""
    for comp in _components(sep):
        inter = intersect_omegaT(a2, buchi_to_omegaT(comp, a2.kind))
        if not omega_is_empty(inter):
            w = find_up_witness(inter)
            return False, str(w) if w else "non-empty intersection (no small UP witness)"
    return True, None


def subset_side(a1: CounterAutomaton, sep: BuchiAutomaton, px: int, py: int) -> tuple[bool, int, str | None]:
    members = 0
    for u in up_grid(a1.alphabet, px, py):
        if up_membership(a1, u):
            members += 1
            if not buchi_up_membership(sep, u):
                return False, members, str(u)
    return True, members, None


def _profinite_replay(cert: SeparatorCertificate) -> tuple[bool, int, str | None, str]:
    count = 0
    for rec in cert.pairs:
        r = cert.separators[rec.component]
        p1 = cert.m1_parts.get(rec.t1, ())
        p2 = cert.m2_parts.get(rec.t2, ())
        count += 1
        if cert.kind is Kind.WB:
            if p1:
                k = disjoint_union([strip(p.automaton) for p in p1]) if len(p1) > 1 else strip(p1[0].automaton)
                if not nfa_equivalent(k, r):
                    return False, count, f"{rec.t1}/{rec.t2}", "R differs from the stripped M1"
            for p in p2:
                if not nfa_is_empty(nfa_intersect(r, strip(p.automaton))):
                    return False, count, f"{rec.t1}/{rec.t2}", "R meets M2"
        else:
            comp = nfa_complement(r)
            for p in p1:
                if not is_empty_S(restrict_profinite(p, comp)):
                    return False, count, f"{rec.t1}/{rec.t2}", "M1 leaves the closure of R"
            for p in p2:
                if not is_empty_S(restrict_profinite(p, r)):
                    return False, count, f"{rec.t1}/{rec.t2}", "M2 meets the closure of R"
    return True, count, None, ""


def verify_separation(a1: CounterAutomaton, a2: CounterAutomaton, sep: BuchiAutomaton,
                      cert: SeparatorCertificate | None = None, grid: tuple[int, int] = (3, 4),
                      workers: int = 4) -> VerificationReport:
    report = VerificationReport({"a1_sha256": automaton_hash(a1), "a2_sha256": automaton_hash(a2),
                                 "separator_sha256": automaton_hash(sep), "grid": list(grid)})
    if cert is not None:
        def hashes():
            ok = (cert.separator_hash == automaton_hash(sep) and cert.a1_hash == automaton_hash(a1)
                  and cert.a2_hash == automaton_hash(a2))
            return ok, 3, None if ok else "hash mismatch", "certificate matches inputs" if ok else "replay refused"
        res = report._run("certificate-hash", hashes)
        if not res.ok:
            return report

    def disjoint():
        ok, cex = disjoint_side(a2, sep)
        return ok, len(sep.initial), cex, "L(A2) and L_sep are disjoint" if ok else "L(A2) meets L_sep"

    def subset():
        ok, members, cex = subset_side(a1, sep, *grid)
        return ok, members, cex, f"{members} grid members of L(A1) checked"

    checks = [("disjoint-side", disjoint), ("subset-side", subset)]
    if cert is not None:
        checks.append(("profinite-replay", lambda: _profinite_replay(cert)))
    report.run_all(checks, workers)
    return report
