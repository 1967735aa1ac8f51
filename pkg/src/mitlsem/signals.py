"""Piecewise-constant signals over [0, inf)."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .intervals import INF, NONNEG, Interval, IntervalSet, as_time, is_finite


class SignalError(ValueError):
    """Raised when raw segments do not partition [0, inf)."""


class Gap(SignalError):
    def __init__(self, where: Interval):
        self.where = where
        super().__init__(f"gap at {where}")


class Overlap(SignalError):
    def __init__(self, where: Interval):
        self.where = where
        super().__init__(f"overlap at {where}")


class MissingTail(SignalError):
    def __init__(self, last: Interval):
        self.last = last
        super().__init__(f"segments stop at {last}; the last one must extend to inf")


@dataclass(frozen=True)
class Signal:
    """Segments ``(interval, frozenset of propositions)`` in time order.

    Use :func:`validate` (or :meth:`Signal.from_segments`) to build one; the
    constructor trusts its input.
    """

    segments: tuple

    @classmethod
    def from_segments(cls, raw) -> "Signal":
        return validate(raw)

    @classmethod
    def constant(cls, props=()) -> "Signal":
        return cls(((NONNEG, frozenset(props)),))

    def __iter__(self):
        return iter(self.segments)

    def __len__(self):
        return len(self.segments)

    def __str__(self):
        return ", ".join(f"({iv}, {{{','.join(sorted(ps))}}})" for iv, ps in self.segments)

    def value_at(self, t) -> frozenset:
        return value_at(self, t)

    def shift(self, r) -> "Signal":
        return shift(self, r)

    def atom_truth_set(self, p: str) -> IntervalSet:
        return atom_truth_set(self, p)

    @property
    def props(self) -> frozenset:
        out = set()
        for _, ps in self.segments:
            out |= ps
        return frozenset(out)

    def breakpoints(self) -> list:
        """Finite segment endpoints, 0 included."""
        pts = {Fraction(0)}
        for iv, _ in self.segments:
            for x in (iv.lo, iv.hi):
                if is_finite(x):
                    pts.add(x)
        return sorted(pts)

    def to_json(self) -> list:
        return [{"interval": str(iv), "props": sorted(ps)} for iv, ps in self.segments]

    def dumps(self, **kwargs) -> str:
        return json.dumps(self.to_json(), **kwargs)

    @classmethod
    def from_json(cls, data) -> "Signal":
        raw = []
        for item in data:
            try:
                raw.append((Interval.parse(item["interval"]), item.get("props", [])))
            except (KeyError, TypeError) as exc:
                raise SignalError(f"bad segment object: {item!r}") from exc
        return validate(raw)

    @classmethod
    def loads(cls, text: str) -> "Signal":
        return cls.from_json(json.loads(text))


def _lo_key(iv: Interval):
    return (iv.lo, not iv.lo_closed)


def validate(raw: Iterable) -> Signal:
    """Check that ``raw`` (interval, props) pairs cover [0, inf) without
    contradicting each other, and merge neighbours with equal proposition
    sets."""
    segs = []
    for iv, props in raw:
        if not isinstance(iv, Interval):
            iv = Interval.parse(iv)
        if iv.is_empty:
            raise SignalError("empty segment")
        segs.append((iv, frozenset(props)))
    if not segs:
        raise MissingTail(Interval.empty())
    segs.sort(key=lambda s: _lo_key(s[0]))

    first = segs[0][0]
    if not (first.lo == 0 and first.lo_closed):
        if first.lo < 0:
            raise Overlap(first.intersect(Interval(first.lo, 0, True, False)))
        raise Gap(Interval(0, first.lo, True, not first.lo_closed))

    # segments may overlap as long as they agree where they do
    merged = [segs[0]]
    for b, props in segs[1:]:
        a, pprops = merged[-1]
        common = a.intersect(b)
        if not common.is_empty and props != pprops:
            raise Overlap(common)
        if b.lo > a.hi or (b.lo == a.hi and not a.hi_closed and not b.lo_closed):
            raise Gap(Interval(a.hi, b.lo, not a.hi_closed, not b.lo_closed))
        if props == pprops:
            if b.hi > a.hi or (b.hi == a.hi and b.hi_closed):
                merged[-1] = (Interval(a.lo, b.hi, a.lo_closed, b.hi_closed), props)
        elif b.hi > a.hi or (b.hi == a.hi and b.hi_closed and not a.hi_closed):
            merged.append((b, props))
        else:
            raise Overlap(b)

    last = merged[-1][0]
    if is_finite(last.hi):
        raise MissingTail(last)
    return Signal(tuple(merged))


def _segment_at(f: Signal, t):
    t = as_time(t)
    if t < 0:
        raise ValueError(f"negative time {t}")
    lo, hi = 0, len(f.segments) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        iv = f.segments[mid][0]
        if t < iv.hi or (t == iv.hi and iv.hi_closed):
            hi = mid
        else:
            lo = mid + 1
    return f.segments[lo]


def value_at(f: Signal, t) -> frozenset:
    """Propositions true at time ``t``."""
    return _segment_at(f, t)[1]


def shift(f: Signal, r) -> Signal:
    """The signal ``t -> f(r + t)``."""
    r = as_time(r)
    if r < 0:
        raise ValueError(f"negative shift {r}")
    raw = []
    for iv, props in f.segments:
        moved = (iv - r).intersect(NONNEG)
        if not moved.is_empty:
            raw.append((moved, props))
    return validate(raw)


def atom_truth_set(f: Signal, p: str) -> IntervalSet:
    return IntervalSet(iv for iv, props in f.segments if p in props)


def random_signal(
    seed,
    max_segments: int = 6,
    time_horizon=6,
    props=("p", "q"),
    denominator: int = 2,
) -> Signal:
    """A reproducible random signal.

    Breakpoints are multiples of ``1/denominator`` in (0, time_horizon].
    Each breakpoint is given to the left or the right segment at random, and
    some become single-point segments, so closed/open endpoints and punctual
    values are all exercised.
    """
    if max_segments < 1:
        raise ValueError("max_segments must be at least 1")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    props = tuple(props)
    horizon = Fraction(time_horizon)
    lattice = int(horizon * denominator)
    n = rng.randint(1, max_segments)

    def pick_props():
        return frozenset(p for p in props if rng.random() < 0.5)

    cuts = []
    budget = n - 1
    candidates = list(range(1, lattice + 1))
    rng.shuffle(candidates)
    while budget > 0 and candidates:
        k = candidates.pop()
        if budget >= 2 and rng.random() < 0.25:
            cuts.append((Fraction(k, denominator), "point"))
            budget -= 2
        else:
            cuts.append((Fraction(k, denominator), rng.choice(("left", "right"))))
            budget -= 1
    cuts.sort()

    raw = []
    lo, lo_closed = Fraction(0), True
    for x, how in cuts:
        if how == "point":
            raw.append((Interval(lo, x, lo_closed, False), pick_props()))
            raw.append((Interval.point(x), pick_props()))
            lo, lo_closed = x, False
        else:
            closed_left = how == "left"
            raw.append((Interval(lo, x, lo_closed, closed_left), pick_props()))
            lo, lo_closed = x, not closed_left
    raw.append((Interval(lo, INF, lo_closed, False), pick_props()))
    return validate(raw)
