"""Exact time values, intervals with open/closed endpoints, and interval sets.

Times are :class:`fractions.Fraction` values.  The two infinities are the
singletons :data:`INF` and :data:`NEG_INF`, which compare and add correctly
against fractions so that interval code never has to special-case them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Union


class Infinity:
    """Positive or negative infinity as an exact time bound."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self):
        return "inf" if self.sign > 0 else "-inf"

    def __hash__(self):
        return hash(("Infinity", self.sign))

    def __eq__(self, other):
        return isinstance(other, Infinity) and other.sign == self.sign

    def __lt__(self, other):
        if isinstance(other, Infinity):
            return self.sign < other.sign
        return self.sign < 0

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        if isinstance(other, Infinity):
            return self.sign > other.sign
        return self.sign > 0

    def __ge__(self, other):
        return self == other or self > other

    def __neg__(self):
        return NEG_INF if self.sign > 0 else INF

    def __add__(self, other):
        if isinstance(other, Infinity) and other.sign != self.sign:
            raise ArithmeticError("inf - inf is undefined")
        return self

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __reduce__(self):
        return (Infinity, (self.sign,))


INF = Infinity(1)
NEG_INF = Infinity(-1)

TimeBound = Union[Fraction, Infinity]


def is_finite(x: TimeBound) -> bool:
    return not isinstance(x, Infinity)


def as_time(x) -> TimeBound:
    """Coerce ints, fractions, decimal strings and "inf" into a time bound."""
    if isinstance(x, Infinity):
        return x
    if isinstance(x, str):
        return parse_time(x)
    if isinstance(x, bool):
        raise TypeError("booleans are not times")
    if isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"not an exact time value: {x!r}")


_TIME_RE = re.compile(r"^\s*(-?inf|[+-]?\d+(?:/\d+|\.\d*)?|[+-]?\.\d+)\s*$")


def parse_time(text: str) -> TimeBound:
    """Parse "3", "-1/2", "0.01" or "inf" exactly."""
    if not _TIME_RE.match(text):
        raise ValueError(f"malformed time value: {text!r}")
    text = text.strip()
    if text == "inf":
        return INF
    if text == "-inf":
        return NEG_INF
    value = Fraction(text)
    return value


def format_time(x: TimeBound) -> str:
    if isinstance(x, Infinity):
        return repr(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def monus(a, b) -> Fraction:
    """Truncated subtraction: max(a - b, 0)."""
    return max(as_time(a) - as_time(b), Fraction(0))


@dataclass(frozen=True)
class Interval:
    """An interval of the real line; each endpoint is open or closed.

    Construction normalizes: infinite endpoints become open and every empty
    interval becomes the open interval (0, 0), so equality is structural.
    """

    lo: TimeBound
    hi: TimeBound
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        lo, hi = as_time(self.lo), as_time(self.hi)
        lo_closed = bool(self.lo_closed) and is_finite(lo)
        hi_closed = bool(self.hi_closed) and is_finite(hi)
        if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
            lo, hi, lo_closed, hi_closed = Fraction(0), Fraction(0), False, False
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo_closed", lo_closed)
        object.__setattr__(self, "hi_closed", hi_closed)

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(lo, hi, True, True)

    @classmethod
    def open(cls, lo, hi) -> "Interval":
        return cls(lo, hi, False, False)

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x, True, True)

    @classmethod
    def empty(cls) -> "Interval":
        return cls(0, 0, False, False)

    @classmethod
    def parse(cls, text: str) -> "Interval":
        """Parse "[a,b]", "(a,b)", "[a,b)" or "(a,b]"; "inf" stands for infinity."""
        m = re.fullmatch(r"\s*([\[(])\s*([^,\s]+)\s*,\s*([^\])\s]+)\s*([\])])\s*", text)
        if not m:
            raise ValueError(f"malformed interval: {text!r}")
        lo, hi = parse_time(m.group(2)), parse_time(m.group(3))
        if lo > hi:
            raise ValueError(f"malformed interval (lower bound above upper): {text!r}")
        return cls(lo, hi, m.group(1) == "[", m.group(4) == "]")

    # -- basic queries -------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return self.lo == 0 and self.hi == 0 and not self.lo_closed and not self.hi_closed

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi and self.lo_closed and self.hi_closed

    @property
    def inf(self) -> TimeBound:
        return INF if self.is_empty else self.lo

    @property
    def sup(self) -> TimeBound:
        return NEG_INF if self.is_empty else self.hi

    @property
    def width(self) -> TimeBound:
        return NEG_INF if self.is_empty else self.hi - self.lo

    @property
    def is_bounded(self) -> bool:
        return is_finite(self.lo) and is_finite(self.hi)

    def __contains__(self, t) -> bool:
        if self.is_empty:
            return False
        t = as_time(t)
        above = t > self.lo or (t == self.lo and self.lo_closed)
        below = t < self.hi or (t == self.hi and self.hi_closed)
        return above and below

    def __str__(self):
        return "{}{},{}{}".format(
            "[" if self.lo_closed else "(",
            format_time(self.lo),
            format_time(self.hi),
            "]" if self.hi_closed else ")",
        )

    # -- closure variants ----------------------------------------------

    def interior(self) -> "Interval":
        return Interval(self.lo, self.hi, False, False)

    def close_left(self) -> "Interval":
        if self.is_empty:
            return self
        return Interval(self.lo, self.hi, True, self.hi_closed)

    def close_right(self) -> "Interval":
        if self.is_empty:
            return self
        return Interval(self.lo, self.hi, self.lo_closed, True)

    def open_right_close_left(self) -> "Interval":
        if self.is_empty:
            return self
        return Interval(self.lo, self.hi, True, False)

    def open_left_close_right(self) -> "Interval":
        if self.is_empty:
            return self
        return Interval(self.lo, self.hi, False, True)

    # -- algebra ---------------------------------------------------------

    def intersect(self, other: "Interval") -> "Interval":
        if self.is_empty or other.is_empty:
            return Interval.empty()
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lo_closed, hi_closed)

    __and__ = intersect

    def __add__(self, other) -> "Interval":
        """Minkowski sum with another interval, or translation by a number."""
        if not isinstance(other, Interval):
            other = Interval.point(other)
        if self.is_empty or other.is_empty:
            return Interval.empty()
        return Interval(
            self.lo + other.lo,
            self.hi + other.hi,
            self.lo_closed and other.lo_closed,
            self.hi_closed and other.hi_closed,
        )

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        if self.is_empty:
            return self
        return Interval(-self.hi, -self.lo, self.hi_closed, self.lo_closed)

    def __sub__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            other = Interval.point(other)
        return self + (-other)

    def issubset(self, other: "Interval") -> bool:
        return self.intersect(other) == self


def inf_sup_width(i: Interval):
    return i.inf, i.sup, i.width


def variants(i: Interval):
    """(interior, close_left, open-right/close-left, open-left/close-right)."""
    return i.interior(), i.close_left(), i.open_right_close_left(), i.open_left_close_right()


NONNEG = Interval(0, INF, True, False)
POSITIVE = Interval(0, INF, False, False)


def _lo_key(i: Interval):
    # closed lower ends sort before open ones at the same value
    return (i.lo, not i.lo_closed)


def _touches(a: Interval, b: Interval) -> bool:
    """For a starting no later than b: is a ∪ b an interval?"""
    if b.lo < a.hi:
        return True
    return b.lo == a.hi and (a.hi_closed or b.lo_closed)


def _canonical(intervals: Iterable[Interval]) -> tuple:
    items = sorted((i for i in intervals if not i.is_empty), key=_lo_key)
    out = []
    for iv in items:
        if out and _touches(out[-1], iv):
            cur = out[-1]
            if iv.hi > cur.hi:
                hi, hi_closed = iv.hi, iv.hi_closed
            elif iv.hi == cur.hi:
                hi, hi_closed = cur.hi, cur.hi_closed or iv.hi_closed
            else:
                hi, hi_closed = cur.hi, cur.hi_closed
            out[-1] = Interval(cur.lo, hi, cur.lo_closed, hi_closed)
        else:
            out.append(iv)
    return tuple(out)


class IntervalSet:
    """A finite union of intervals in canonical form.

    Members are sorted by position, and no two of them touch or overlap.
    """

    __slots__ = ("members", "_hash")

    def __init__(self, intervals: Iterable[Interval] = ()):
        self.members = _canonical(intervals)
        self._hash = None

    @classmethod
    def of(cls, *intervals: Interval) -> "IntervalSet":
        return cls(intervals)

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        """Parse "[0,1] U (2,inf)"; "{}" or "" is the empty set."""
        text = text.strip()
        if text in ("", "{}", "∅"):
            return cls()
        return cls(Interval.parse(part) for part in re.split(r"\s*(?:U|∪)\s*", text))

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __bool__(self):
        return bool(self.members)

    @property
    def is_empty(self) -> bool:
        return not self.members

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.members == other.members

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.members)
        return self._hash

    def __repr__(self):
        return f"IntervalSet({str(self)!r})"

    def __str__(self):
        if not self.members:
            return "{}"
        return " U ".join(str(m) for m in self.members)

    def __contains__(self, t) -> bool:
        t = as_time(t)
        return any(t in m for m in self.members)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.members + other.members)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(a.intersect(b) for a in self.members for b in other.members)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersect(other.complement(Interval(NEG_INF, INF)))

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def complement(self, universe: Interval = NONNEG) -> "IntervalSet":
        """Complement relative to ``universe`` (by default [0, inf))."""
        out = []
        lo, lo_closed = universe.lo, universe.lo_closed
        for m in self.members:
            m = m.intersect(universe)
            if m.is_empty:
                continue
            out.append(Interval(lo, m.lo, lo_closed, not m.lo_closed))
            lo, lo_closed = m.hi, not m.hi_closed
        out.append(Interval(lo, universe.hi, lo_closed, universe.hi_closed))
        return IntervalSet(out)

    def clip(self, window: Interval = NONNEG) -> "IntervalSet":
        return IntervalSet(m.intersect(window) for m in self.members)

    def shift_by(self, r) -> "IntervalSet":
        """Translate every member by ``r`` (no clipping)."""
        r = as_time(r)
        return IntervalSet(m + r for m in self.members)

    def minkowski_add(self, i: Interval) -> "IntervalSet":
        return IntervalSet(m + i for m in self.members)

    def covers(self, i: Interval) -> bool:
        """Is ``i`` a subset of this set?"""
        if i.is_empty:
            return True
        return any(i.issubset(m) for m in self.members)

    def issubset(self, other: "IntervalSet") -> bool:
        return all(other.covers(m) for m in self.members)

    def breakpoints(self) -> list:
        """Finite endpoints of all members, sorted and without duplicates."""
        pts = set()
        for m in self.members:
            for x in (m.lo, m.hi):
                if is_finite(x):
                    pts.add(x)
        return sorted(pts)


def union(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return a.union(b)


def intersect(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return a.intersect(b)


def complement_within_nonneg(a: IntervalSet) -> IntervalSet:
    return a.complement(NONNEG)


def shift_by(a: IntervalSet, r) -> IntervalSet:
    return a.shift_by(r)


def minkowski_add(a: IntervalSet, i: Interval) -> IntervalSet:
    return a.minkowski_add(i)


def eps_ball(points, eps) -> IntervalSet:
    """Union of the closed intervals [a - eps, a + eps] over the points."""
    eps = as_time(eps)
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return IntervalSet(Interval.closed(as_time(a) - eps, as_time(a) + eps) for a in points)


EMPTY = IntervalSet()
ALL_TIME = IntervalSet([NONNEG])
