"""Witnesses and proof sets for bounded Until/Release.

A witness certifies a temporal formula for a whole interval of evaluation
times at once.  For ``phi1 U_I phi2`` it is a pair (r, w) of instants; for
``phi1 R_J phi2`` it is an interval.  The proof set of a witness is the set
of evaluation times it certifies.  The partition functions split the truth
set inside [0, step) into at most two (Until) or four (Release) ordered
pieces and find one witness per piece.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .formula import Formula, Release, Until
from .intervals import (
    EMPTY,
    INF,
    NEG_INF,
    NONNEG,
    Interval,
    IntervalSet,
    as_time,
    format_time,
    is_finite,
)
from .semantics import (
    Semantics,
    next_truth_set,
    previous_truth_set,
    truth_set,
)
from .signals import Signal


class WitnessError(ValueError):
    """Raised on precondition violations and failed extractions."""


def step(i: Interval) -> Fraction:
    """Granularity at which a bounded temporal operator can change truth."""
    if i.is_empty or not i.is_bounded or i.lo <= 0:
        raise WitnessError(f"step size needs a bounded interval with inf > 0, got {i}")
    width = i.hi - i.lo
    return width if width < i.lo else i.lo


class ClockBound(NamedTuple):
    obligations: int
    until_clock_bound: int
    conservative_bound: int


def clock_bound(i: Interval) -> ClockBound:
    """Simultaneous proof obligations of one bounded operator, and the clock
    counts they imply for Until (two per obligation) and in general (four)."""
    s = step(i)
    obligations = math.ceil(i.lo / s) + 1
    return ClockBound(obligations, 2 * obligations, 4 * obligations)


# ---------------------------------------------------------------------------
# witness intervals


@dataclass(frozen=True)
class Span:
    """An interval that remembers its position even when it is empty.

    ``(a, a]`` contains no point, yet its closure from the left is {a} and
    adding [0, inf) to it gives (a, inf).  Release witnesses of the fourth
    kind rely on this, so they cannot use the normalized :class:`Interval`.
    """

    lo: Fraction
    hi: object
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", as_time(self.lo))
        object.__setattr__(self, "hi", as_time(self.hi))
        if not is_finite(self.hi):
            object.__setattr__(self, "hi_closed", False)

    @classmethod
    def of(cls, i: Interval) -> "Span":
        return cls(i.lo, i.hi, i.lo_closed, i.hi_closed)

    @property
    def points(self) -> Interval:
        return Interval(self.lo, self.hi, self.lo_closed, self.hi_closed)

    @property
    def is_empty(self) -> bool:
        return self.points.is_empty

    @property
    def left_closure_nonempty(self) -> bool:
        return self.lo < self.hi or (self.lo == self.hi and self.hi_closed)

    @property
    def right_closed(self) -> bool:
        return self.hi_closed or not is_finite(self.hi)

    @property
    def left_closed(self) -> bool:
        return self.lo_closed

    def __str__(self):
        return "{}{},{}{}".format(
            "[" if self.lo_closed else "(",
            format_time(self.lo),
            format_time(self.hi),
            "]" if self.hi_closed else ")",
        )


@dataclass(frozen=True)
class UntilWitness:
    r: Fraction
    w: Fraction
    kind: int


@dataclass(frozen=True)
class ReleaseWitness:
    interval: Span
    kind: int


@dataclass(frozen=True)
class PartitionReport:
    formula: Formula
    step: Fraction
    truth: IntervalSet  # truth set inside [0, step)
    intervals: tuple  # T1..Tk as Interval, possibly empty
    witnesses: tuple  # one per T, None where T is empty

    @property
    def union(self) -> IntervalSet:
        return IntervalSet(self.intervals)

    @property
    def nonempty(self) -> list:
        return [t for t in self.intervals if not t.is_empty]


class _Sets:
    """Truth sets (new semantics) of the two operands and derived sets."""

    def __init__(self, f: Signal, phi1: Formula, phi2: Formula):
        memo = {}
        self.s1 = truth_set(f, phi1, Semantics.NEW, memo)
        self.s2 = truth_set(f, phi2, Semantics.NEW, memo)
        self.next1 = next_truth_set(self.s1)
        self.next2 = next_truth_set(self.s2)
        self.prev2 = previous_truth_set(self.s2)

    def points(self) -> set:
        pts = set()
        for s in (self.s1, self.s2, self.next1, self.next2, self.prev2):
            pts.update(s.breakpoints())
        return pts


def _check_kind(kind, allowed):
    if kind not in allowed:
        raise WitnessError(f"invalid witness kind {kind!r}")


# ---------------------------------------------------------------------------
# Until


def _until_holds(sets: _Sets, r, w, kind) -> bool:
    _check_kind(kind, (1, 2, 3))
    r, w = as_time(r), as_time(w)
    between = Interval(r, w, False, False)
    if kind == 1:
        return r <= w and sets.s1.covers(between) and w in sets.s2
    if kind == 2:
        return r < w and sets.s1.covers(between) and w in sets.prev2
    return (
        r < w
        and sets.s1.covers(Interval(r, w, False, True))
        and w in sets.next1
        and w in sets.next2
    )


def _until_offsets(i: Interval, kind) -> Interval:
    if kind == 1:
        return i
    if kind == 2:
        return i.open_left_close_right()
    return i.open_right_close_left()


def _until_proof(sets: _Sets, r, w, i: Interval, kind) -> IntervalSet:
    if not _until_holds(sets, r, w, kind):
        return EMPTY
    r, w = as_time(r), as_time(w)
    v = _until_offsets(i, kind)
    t_range = (Interval.point(w) - v).intersect(Interval(r, INF, True, False))
    return IntervalSet([t_range]).clip(NONNEG)


def until_witness_holds(f: Signal, phi1: Formula, phi2: Formula, r, w, kind: int) -> bool:
    if as_time(r) < 0 or as_time(w) < 0:
        raise WitnessError("r and w must be non-negative")
    return _until_holds(_Sets(f, phi1, phi2), r, w, kind)


def until_proof_set(f: Signal, phi1: Formula, phi2: Formula, r, w, i: Interval, kind: int) -> IntervalSet:
    """Evaluation times certified by the Until witness (r, w)."""
    return _until_proof(_Sets(f, phi1, phi2), r, w, i, kind)


# ---------------------------------------------------------------------------
# Release


def _release_holds(sets: _Sets, span: Span, kind) -> bool:
    _check_kind(kind, (1, 2, 3, 4))
    pts = span.points
    if kind == 1:
        return sets.s2.covers(pts)
    if kind == 2:
        return not pts.is_empty and span.left_closed and sets.s1.covers(pts)
    if kind == 3:
        return (
            not pts.is_empty
            and span.right_closed
            and sets.s2.covers(pts)
            and is_finite(span.hi)
            and span.hi in sets.s1
        )
    return (
        span.left_closure_nonempty
        and span.right_closed
        and sets.s2.covers(pts)
        and is_finite(span.hi)
        and span.hi in sets.next1
    )


def translates_within(j: Interval, k: Interval) -> Interval:
    """{t : t + j is a subset of k} as an interval of the real line."""
    if j.is_empty:
        return Interval(NEG_INF, INF, False, False)
    if k.is_empty:
        return Interval.empty()
    if is_finite(k.lo):
        lo, lo_closed = k.lo - j.lo, k.lo_closed or not j.lo_closed
    else:
        lo, lo_closed = NEG_INF, False
    if is_finite(k.hi):
        if not is_finite(j.hi):
            return Interval.empty()
        hi, hi_closed = k.hi - j.hi, k.hi_closed or not j.hi_closed
    else:
        hi, hi_closed = INF, False
    return Interval(lo, hi, lo_closed, hi_closed)


def _release_proof(sets: _Sets, span: Span, j: Interval, kind) -> IntervalSet:
    if not _release_holds(sets, span, kind):
        return EMPTY
    if kind == 1:
        t_range = translates_within(j, span.points)
    elif kind == 2:
        if j.is_empty or not j.lo > 0:
            return EMPTY
        after = Interval(span.lo, INF, False, False)
        t_range = translates_within(j, after).intersect(Interval(NEG_INF, span.hi, False, False))
    else:
        upward = Interval(span.lo, INF, span.lo_closed, False)
        t_range = translates_within(j, upward).intersect(
            Interval(NEG_INF, span.hi, False, kind == 4)
        )
    return IntervalSet([t_range]).clip(NONNEG)


def release_witness_holds(f: Signal, phi1: Formula, phi2: Formula, i, kind: int) -> bool:
    span = i if isinstance(i, Span) else Span.of(i)
    return _release_holds(_Sets(f, phi1, phi2), span, kind)


def release_proof_set(f: Signal, phi1: Formula, phi2: Formula, i, j: Interval, kind: int) -> IntervalSet:
    """Evaluation times at which ``phi1 R_j phi2`` is certified by ``i``."""
    span = i if isinstance(i, Span) else Span.of(i)
    return _release_proof(_Sets(f, phi1, phi2), span, j, kind)


# ---------------------------------------------------------------------------
# partitions


def _with_midpoints(points) -> list:
    pts = sorted(set(points))
    if not pts:
        return []
    out = set(pts)
    out.update((a + b) / 2 for a, b in zip(pts, pts[1:]))
    out.add(pts[-1] + 1)
    return sorted(out)


def _cut_candidates(piece: Interval, points) -> list:
    """Proper prefixes of ``piece`` ending at one of ``points``, longest first."""
    out = []
    for x in sorted(set(points), reverse=True):
        if piece.lo < x < piece.hi:
            out.append(Interval(piece.lo, x, piece.lo_closed, True))
            out.append(Interval(piece.lo, x, piece.lo_closed, False))
        elif x == piece.hi and piece.hi_closed and piece.lo < x:
            # leave the single point x for the next slot
            out.append(Interval(piece.lo, x, piece.lo_closed, False))
        elif x == piece.lo and piece.lo_closed:
            out.append(Interval.point(x))
    return [c for c in out if not c.is_empty]


def _remainder(piece: Interval, prefix: Interval) -> Interval:
    return Interval(prefix.hi, piece.hi, not prefix.hi_closed, piece.hi_closed)


def _cover(pieces: list, slots: list, cut_points) -> Optional[list]:
    """Assign consecutive prefixes of ``pieces`` to ``slots`` in order.

    Each slot is a function ``T -> witness or None``.  Returns one
    (T, witness) per slot, where T may be empty.  Returns None when no
    assignment exists.
    """

    def go(k, piece, s):
        if piece is None:
            if k == len(pieces):
                return [(Interval.empty(), None)] * (len(slots) - s)
            piece = pieces[k]
            k += 1
        if s == len(slots):
            return None
        find = slots[s]
        found = find(piece)
        if found is not None:
            rest = go(k, None, s + 1)
            if rest is not None:
                return [(piece, found)] + rest
        for prefix in _cut_candidates(piece, cut_points):
            found = find(prefix)
            if found is None:
                continue
            rest = go(k, _remainder(piece, prefix), s + 1)
            if rest is not None:
                return [(prefix, found)] + rest
            break
        rest = go(k, piece, s + 1)
        if rest is not None:
            return [(Interval.empty(), None)] + rest
        return None

    if not pieces:
        return [(Interval.empty(), None)] * len(slots)
    return go(0, None, 0)


def until_partition(f: Signal, phi1: Formula, phi2: Formula, i: Interval) -> PartitionReport:
    """Split the Until truth set inside [0, step(i)) into T1 < T2 with witnesses."""
    st = step(i)
    sets = _Sets(f, phi1, phi2)
    phi = Until(phi1, phi2, i)
    window = Interval(0, st, True, False)
    truth = truth_set(f, phi, Semantics.NEW).clip(window)
    base = sets.points()
    close_right = i.close_right()

    def finder(kinds, first):
        def find(t: Interval):
            r, s = t.lo, t.hi
            cands = set(base)
            cands.update(x + e for x in (r, s) for e in (i.lo, i.hi))
            cands.add(r)
            for w in _with_midpoints(c for c in cands if c >= r):
                for kind in kinds:
                    if first and kind == 1:
                        ok_offset = (w - r) in i
                    else:
                        ok_offset = (w - r) in close_right
                    if not ok_offset:
                        continue
                    proof = _until_proof(sets, r, w, i, kind)
                    if proof.covers(t):
                        return UntilWitness(r, w, kind)
            return None

        return find

    cut_points = {x - e for x in base | {st} for e in (0, i.lo, i.hi)}
    assignment = _cover(list(truth), [finder((1, 2), True), finder((1, 3), False)], cut_points)
    if assignment is None:
        raise WitnessError(f"no witness cover for {phi} on {f}")
    return PartitionReport(
        phi,
        st,
        truth,
        tuple(t for t, _ in assignment),
        tuple(w for _, w in assignment),
    )


def release_partition(f: Signal, phi1: Formula, phi2: Formula, j: Interval) -> PartitionReport:
    """Split the Release truth set inside [0, step(j)) into T1 < ... < T4."""
    st = step(j)
    sets = _Sets(f, phi1, phi2)
    phi = Release(phi1, phi2, j)
    window = Interval(0, st, True, False)
    truth = truth_set(f, phi, Semantics.NEW).clip(window)
    base = sets.points()
    early = Interval(0, st, False, False)
    late = Interval(st, st + j.hi, True, False)

    def inside(span: Span, region: Interval) -> bool:
        lo_ok = span.lo > region.lo or (span.lo == region.lo and (region.lo_closed or not span.lo_closed))
        hi_ok = span.hi < region.hi or (span.hi == region.hi and (region.hi_closed or not span.hi_closed))
        return lo_ok and hi_ok

    def accept(span, kind, t, region):
        return inside(span, region) and _release_proof(sets, span, j, kind).covers(t)

    def candidates(t: Interval):
        pts = set(base)
        pts.update(x + e for x in (t.lo, t.hi) for e in (0, j.lo, j.hi))
        pts.update((st, st + j.hi))
        return _with_midpoints(p for p in pts if p >= 0)

    def find_kind(t: Interval, kind, region):
        if kind == 1:
            span = Span.of(t + j)
            return span if accept(span, 1, t, region) else None
        if kind == 2:
            # the witness must start before t + inf j and end after t; the
            # shortest spans are tried first
            pts = candidates(t)
            his = [v for v in pts if v >= t.hi]
            los = [x for x in reversed(pts) if x <= t.lo + j.lo]
            for v in his:
                for hi_closed in (False, True):
                    for x in los:
                        if x > v:
                            continue
                        span = Span(x, v, True, hi_closed)
                        if not sets.s1.covers(span.points):
                            break
                        if accept(span, 2, t, region):
                            return span
            return None
        u = t.lo + j.lo
        for v in candidates(t):
            if v < u:
                continue
            for lo_closed in (False, True):
                span = Span(u, v, lo_closed, True)
                if accept(span, kind, t, region):
                    return span
        return None

    def finder(kinds, region):
        def find(t: Interval):
            for kind in kinds:
                span = find_kind(t, kind, region)
                if span is not None:
                    return ReleaseWitness(span, kind)
            return None

        return find

    slots = [
        finder((2,), early),
        finder((1,), late),
        finder((4,), late),
        finder((2, 3, 4), late),
    ]
    cut_points = {x - e for x in base | {st} for e in (0, j.lo, j.hi)}
    assignment = _cover(list(truth), slots, cut_points)
    if assignment is None:
        raise WitnessError(f"no witness cover for {phi} on {f}")
    return PartitionReport(
        phi,
        st,
        truth,
        tuple(t for t, _ in assignment),
        tuple(w for _, w in assignment),
    )
