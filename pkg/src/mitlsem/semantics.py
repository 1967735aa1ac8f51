"""Truth sets of formulas over signals, computed with interval algebra.

Two release semantics are supported.  ``Semantics.OLD`` has the usual two
disjuncts; ``Semantics.NEW`` adds a third disjunct that lets the right
operand hand over to the left one at an instant where the left operand only
starts to hold immediately afterwards.  Until is the same in both.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .formula import (
    And,
    Atom,
    Bottom,
    Formula,
    Not,
    Or,
    Release,
    Top,
    Until,
    nnf,
    to_old,
)
from .intervals import (
    ALL_TIME,
    EMPTY,
    INF,
    NONNEG,
    POSITIVE,
    Interval,
    IntervalSet,
    as_time,
)
from .signals import Signal, atom_truth_set


class Semantics(enum.Enum):
    OLD = "old"
    NEW = "new"


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


# ---------------------------------------------------------------------------
# set-level building blocks


def next_truth_set(s: IntervalSet) -> IntervalSet:
    """Instants t with (t, t + e) inside ``s`` for some e > 0."""
    return IntervalSet(
        Interval(m.lo, m.hi, True, False) for m in s if m.hi > m.lo
    )


def previous_truth_set(s: IntervalSet) -> IntervalSet:
    """Instants t > 0 with (t - e, t) inside ``s`` for some e > 0."""
    return IntervalSet(
        Interval(m.lo, m.hi, False, True) for m in s if m.hi > m.lo
    ).clip(POSITIVE)


def shift_back(x: IntervalSet, offsets: Interval) -> IntervalSet:
    """{t >= 0 : t + s in x for some s in offsets}."""
    return IntervalSet(m - offsets for m in x).clip(NONNEG)


def _until(s1: IntervalSet, s2: IntervalSet, i: Interval) -> IntervalSet:
    # t + t1 = x must lie in a maximal piece C of s1 entered right after t:
    # t in [inf C, sup C) and x in (t, sup C].  With t1 = 0 only s2 matters.
    parts = [s2] if 0 in i else []
    pos = i.intersect(POSITIVE)
    for c in s1:
        start = Interval(c.lo, c.hi, True, False)
        reach = Interval(c.lo, c.hi, False, True)
        for d in s2:
            target = d.intersect(reach)
            if target.is_empty:
                continue
            parts.append(IntervalSet([(target - pos).intersect(start)]))
    out = EMPTY
    for p in parts:
        out = out | p
    return out.clip(NONNEG)


def _window_reach(x: IntervalSet, s2: IntervalSet, i: Interval, offsets: Interval) -> IntervalSet:
    """{t : some t1 in offsets has t + t1 in x and s2 covering t + (i ∩ [0, t1])}.

    ``offsets`` must lie inside ``i``, so the window is never empty and runs
    from t + inf i up to t + t1 inside a single maximal piece of s2.
    """
    if i.is_empty or offsets.is_empty:
        return EMPTY
    a = i.lo
    out = []
    for c in s2:
        # where t + a may sit so that the window can start inside c
        if i.lo_closed:
            anchor = c
        else:
            anchor = Interval(c.lo, INF, True, False)
        anchor = anchor - a
        for e in x.intersect(IntervalSet([c])):
            out.append((e - offsets).intersect(anchor))
    return IntervalSet(out).clip(NONNEG)


def _release(s1: IntervalSet, s2: IntervalSet, i: Interval, sem: Semantics) -> IntervalSet:
    # (a) s2 throughout t + i
    bad = s2.complement()
    always = shift_back(bad, i).complement()
    if i.is_empty:
        return always
    # (b) s1 strictly before the window t + i even starts
    before = Interval(0, i.lo, False, not i.lo_closed)
    early = shift_back(s1, before)
    # (c) s1 at some t + t1 inside the window, s2 on the window up to there
    inside = _window_reach(s1, s2, i, i.intersect(POSITIVE))
    out = always | early | inside
    if sem is Semantics.NEW:
        # (d) s2 on the window up to t + t1, then s1 right after t + t1
        nxt = next_truth_set(s1)
        if not i.lo_closed and i.lo < i.hi:
            out = out | shift_back(nxt, Interval.point(i.lo))
        handover = Interval(i.lo, i.hi, i.lo_closed, False)
        out = out | _window_reach(nxt, s2, i, handover)
    return out


# ---------------------------------------------------------------------------
# the engine


def truth_set(f: Signal, phi: Formula, sem: Semantics = Semantics.NEW, _memo=None) -> IntervalSet:
    """{t >= 0 : the signal shifted by t satisfies phi}."""
    memo = {} if _memo is None else _memo

    def go(node):
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Top):
            out = ALL_TIME
        elif isinstance(node, Bottom):
            out = EMPTY
        elif isinstance(node, Atom):
            out = atom_truth_set(f, node.name)
        elif isinstance(node, Not):
            out = go(node.arg).complement()
        elif isinstance(node, Or):
            out = go(node.left) | go(node.right)
        elif isinstance(node, And):
            out = go(node.left) & go(node.right)
        elif isinstance(node, Until):
            out = _until(go(node.left), go(node.right), node.interval)
        elif isinstance(node, Release):
            out = _release(go(node.left), go(node.right), node.interval, sem)
        else:
            raise TypeError(f"not a formula: {node!r}")
        memo[node] = out
        return out

    return go(phi)


def truth_sets(f: Signal, phi: Formula, sem: Semantics = Semantics.NEW) -> dict:
    """Truth set of every subformula of ``phi``."""
    memo = {}
    truth_set(f, phi, sem, memo)
    return memo


def sat(f: Signal, phi: Formula, sem: Semantics = Semantics.NEW) -> bool:
    return 0 in truth_set(f, phi, sem)


def fvar_at(s: IntervalSet, r, side: Side) -> bool:
    """Does the finite-variability implication hold for ``s`` at ``r``?

    Right side: if every (r, r + e) meets s then some (r, r + e) lies in s.
    Left side (r > 0): the same with (r - e, r).
    """
    r = as_time(r)
    if side is Side.RIGHT:
        if r < 0:
            raise ValueError("r must be non-negative")
        meets = any(m.lo <= r < m.hi for m in s)
        return (not meets) or r in next_truth_set(s)
    if r <= 0:
        raise ValueError("left finite variability needs r > 0")
    meets = any(m.lo < r <= m.hi for m in s)
    return (not meets) or r in previous_truth_set(s)


# ---------------------------------------------------------------------------
# equivalence checks


@dataclass(frozen=True)
class DualityReport:
    formula: Formula
    semantics: Semantics
    set_phi: IntervalSet
    set_nnf: IntervalSet
    equal: bool
    mismatch: IntervalSet


@dataclass(frozen=True)
class BridgeReport:
    formula: Formula
    translated: Formula
    set_new: IntervalSet
    set_old: IntervalSet
    equal: bool
    mismatch: IntervalSet


def symmetric_difference(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return (a - b) | (b - a)


def duality_check(f: Signal, phi: Formula, sem: Semantics = Semantics.NEW) -> DualityReport:
    """Compare the truth sets of ``phi`` and of its negation normal form."""
    a = truth_set(f, phi, sem)
    b = truth_set(f, nnf(phi), sem)
    diff = symmetric_difference(a, b)
    return DualityReport(phi, sem, a, b, diff.is_empty, diff)


def bridge_check(f: Signal, phi: Formula) -> BridgeReport:
    """Compare ``phi`` under NEW with ``to_old(phi)`` under OLD."""
    translated = to_old(phi)
    a = truth_set(f, phi, Semantics.NEW)
    b = truth_set(f, translated, Semantics.OLD)
    diff = symmetric_difference(a, b)
    return BridgeReport(phi, translated, a, b, diff.is_empty, diff)
