"""Per-counter effect abstraction used to decide S-emptiness.

An effect summarises what a family of paths does to one counter, in terms
of increment counts classified as 0 (none), 1 (positive but bounded) or
W (can be pumped arbitrarily high):

* ``NoReset(i)``: no reset, ``i`` increments.
* ``Reset(p, m, q)``: at least one reset; ``p`` increments before the first
  reset, ``q`` after the last one, and ``m`` is LARGE when every reset
  between the first and the last one resets a pumped value.

Effects are small integers so that the operation tables below are plain
lookups: ``NoReset(i) = i`` and ``Reset(p, m, q) = 3 + 6p + 3m + q``.
A vector of effects (one per counter) is a tuple of such codes.
"""
from __future__ import annotations

from typing import Sequence

from .automata import Op

ZERO, ONE, W = 0, 1, 2
SMALL, LARGE = 0, 1
SIZE = 21


def no_reset(i: int) -> int:
    return i


def reset(p: int, m: int, q: int) -> int:
    return 3 + 6 * p + 3 * m + q


def decode(code: int) -> tuple:
    """``("N", i)`` or ``("R", p, m, q)``."""
    if code < 3:
        return ("N", code)
    c = code - 3
    return ("R", c // 6, (c % 6) // 3, c % 3)


def oplus(x: int, y: int) -> int:
    if x == W or y == W:
        return W
    return max(x, y)


def big(x: int) -> int:
    return LARGE if x == W else SMALL


def _compose(a: int, b: int) -> int:
    da, db = decode(a), decode(b)
    if da[0] == "N" and db[0] == "N":
        return no_reset(oplus(da[1], db[1]))
    if da[0] == "N":
        _, p, m, q = db
        return reset(oplus(da[1], p), m, q)
    if db[0] == "N":
        _, p, m, q = da
        return reset(p, m, oplus(q, db[1]))
    _, p, m, q = da
    _, p2, m2, q2 = db
    return reset(p, min(m, m2, big(oplus(q, p2))), q2)


def _sharp(a: int) -> int:
    d = decode(a)
    if d[0] == "N":
        return no_reset(W if d[1] != ZERO else ZERO)
    _, p, m, q = d
    return reset(p, min(m, big(oplus(q, p))), q)


def _leq(a: int, b: int) -> bool:
    """``a`` is dominated by ``b``: every run family ``a`` describes is
    matched by one of ``b`` with at least the same pumped parts."""
    da, db = decode(a), decode(b)
    if da[0] != db[0]:
        return False
    return all(x <= y for x, y in zip(da[1:], db[1:]))


COMPOSE = [[_compose(a, b) for b in range(SIZE)] for a in range(SIZE)]
SHARP = [_sharp(a) for a in range(SIZE)]
LEQ = [[_leq(a, b) for b in range(SIZE)] for a in range(SIZE)]
# a word ending here keeps the counter's values unbounded
GOOD_FINAL = [decode(a)[0] == "N" or (decode(a)[1] == W and decode(a)[2] == LARGE) for a in range(SIZE)]
# iterating a loop with this effect forever drives every reset value up
GOOD_LOOP = [decode(a)[0] == "R" and decode(a)[2] == LARGE and W in (decode(a)[1], decode(a)[3])
             for a in range(SIZE)]

OP_EFFECT = {Op.NIL: no_reset(ZERO), Op.INC: no_reset(ONE), Op.RESET: reset(ZERO, LARGE, ZERO)}

Vector = tuple[int, ...]


def of_ops(ops: Sequence[Op]) -> Vector:
    return tuple(OP_EFFECT[o] for o in ops)


_COMPOSE_MEMO: dict = {}
_LEQ_MEMO: dict = {}
_SHARP_MEMO: dict = {}


def vcompose(u: Vector, v: Vector) -> Vector:
    key = (u, v)
    out = _COMPOSE_MEMO.get(key)
    if out is None:
        out = _COMPOSE_MEMO[key] = tuple(COMPOSE[a][b] for a, b in zip(u, v))
    return out


def vsharp(u: Vector) -> Vector:
    out = _SHARP_MEMO.get(u)
    if out is None:
        out = _SHARP_MEMO[u] = tuple(SHARP[a] for a in u)
    return out


def vleq(u: Vector, v: Vector) -> bool:
    key = (u, v)
    out = _LEQ_MEMO.get(key)
    if out is None:
        out = _LEQ_MEMO[key] = all(LEQ[a][b] for a, b in zip(u, v))
    return out


def unit(width: int) -> Vector:
    return (no_reset(ZERO),) * width


def good_final(u: Vector) -> bool:
    return all(GOOD_FINAL[a] for a in u)


def good_loop(u: Vector) -> bool:
    return all(GOOD_LOOP[a] for a in u)


def describe(code: int) -> str:
    names = {0: "0", 1: "1", 2: "w"}
    d = decode(code)
    if d[0] == "N":
        return f"NoReset({names[d[1]]})"
    return f"Reset({names[d[1]]},{'large' if d[2] else 'small'},{names[d[3]]})"
