"""A brute-force pointwise evaluator used to cross-check the truth-set engine.

It follows the satisfaction clauses literally.  Quantified offsets range over
the reals, but the truth of every subformula is constant between consecutive
points of a finite *grid* (signal breakpoints, shifted back by interval
endpoints, closed under the operators), so each quantifier only needs to
look at grid points and at one rational point inside each gap.

Nothing here calls into :mod:`mitlsem.semantics`.
"""

from __future__ import annotations

from bisect import bisect_left
from fractions import Fraction

from .formula import And, Atom, Bottom, Formula, Not, Or, Release, Top, Until
from .intervals import Interval, is_finite

_ZERO = Fraction(0)


def _member(i: Interval, x) -> bool:
    if i.is_empty:
        return False
    if x < i.lo or (x == i.lo and not i.lo_closed):
        return False
    if x > i.hi or (x == i.hi and not i.hi_closed):
        return False
    return True


def _offsets(i: Interval) -> list:
    if i.is_empty:
        return []
    return [e for e in (i.lo, i.hi) if is_finite(e)]


class _Cell:
    """A grid point (``lo == hi == rep``) or the open gap (lo, hi) with
    representative ``rep``."""

    __slots__ = ("rep", "lo", "hi", "point")

    def __init__(self, rep, lo, hi, point):
        self.rep, self.lo, self.hi, self.point = rep, lo, hi, point

    def meets(self, lo, lo_closed, hi, hi_closed) -> bool:
        """Does this cell intersect the range <lo, hi>?"""
        if self.point:
            x = self.rep
            above = x > lo or (x == lo and lo_closed)
            below = hi is None or x < hi or (x == hi and hi_closed)
            return above and below
        # open gap (self.lo, self.hi); self.hi may be None for the tail
        if hi is not None and not (self.lo < hi):
            return False
        if self.hi is not None and not (lo < self.hi):
            return False
        return True


def _cells(points: list) -> list:
    """Points and gaps of a sorted list, followed by the unbounded tail."""
    out = []
    for k, p in enumerate(points):
        out.append(_Cell(p, p, p, True))
        if k + 1 < len(points):
            q = points[k + 1]
            out.append(_Cell((p + q) / 2, p, q, False))
    last = points[-1]
    out.append(_Cell(last + 1, last, None, False))
    return out


class Oracle:
    """Pointwise evaluator for one signal and one release semantics."""

    def __init__(self, signal, sem):
        from .semantics import Semantics  # only the enum

        self.signal = signal
        self.new = sem is Semantics.NEW or sem == "new"
        self._grid = {}
        self._memo = {}
        self._base = sorted(set(signal.breakpoints()) | {_ZERO})

    # -- grids -----------------------------------------------------------

    def grid(self, phi: Formula) -> list:
        """Sorted instants outside of which ``phi``'s truth cannot change."""
        hit = self._grid.get(phi)
        if hit is not None:
            return hit
        if isinstance(phi, (Top, Bottom)):
            pts = {_ZERO}
        elif isinstance(phi, Atom):
            pts = set(self._base)
        elif isinstance(phi, Not):
            pts = set(self.grid(phi.arg))
        elif isinstance(phi, (And, Or)):
            pts = set(self.grid(phi.left)) | set(self.grid(phi.right))
        else:
            inner = set(self.grid(phi.left)) | set(self.grid(phi.right))
            pts = set(inner)
            for e in _offsets(phi.interval):
                pts |= {g - e for g in inner if g >= e}
            pts.add(_ZERO)
        out = sorted(pts)
        self._grid[phi] = out
        return out

    def representative(self, phi: Formula, t) -> Fraction:
        g = self.grid(phi)
        k = bisect_left(g, t)
        if k < len(g) and g[k] == t:
            return t
        if k == len(g):
            return g[-1] + 1
        return (g[k - 1] + g[k]) / 2

    # -- satisfaction --------------------------------------------------------

    def sat(self, phi: Formula, t) -> bool:
        t = Fraction(t)
        if t < 0:
            raise ValueError("negative time")
        key = (phi, self.representative(phi, t))
        hit = self._memo.get(key)
        if hit is None:
            hit = self._eval(phi, key[1])
            self._memo[key] = hit
        return hit

    def _eval(self, phi, t) -> bool:
        if isinstance(phi, Top):
            return True
        if isinstance(phi, Bottom):
            return False
        if isinstance(phi, Atom):
            return phi.name in self.signal.value_at(t)
        if isinstance(phi, Not):
            return not self.sat(phi.arg, t)
        if isinstance(phi, Or):
            return self.sat(phi.left, t) or self.sat(phi.right, t)
        if isinstance(phi, And):
            return self.sat(phi.left, t) and self.sat(phi.right, t)
        if isinstance(phi, Until):
            return self._until(phi, t)
        if isinstance(phi, Release):
            return self._release(phi, t)
        raise TypeError(f"not a formula: {phi!r}")

    def _local_points(self, phi, t, extra=()) -> list:
        pts = {t}
        pts.update(t + e for e in _offsets(phi.interval))
        pts.update(extra)
        for g in self.grid(phi.left) + self.grid(phi.right):
            if g > t:
                pts.add(g)
        return sorted(pts)

    def _forall(self, sub, cells, lo, lo_closed, hi, hi_closed) -> bool:
        """``sub`` at every instant of the range <lo, hi> (hi None: unbounded)."""
        if hi is not None and (hi < lo or (hi == lo and not (lo_closed and hi_closed))):
            return True
        for c in cells:
            if c.meets(lo, lo_closed, hi, hi_closed) and not self.sat(sub, c.rep):
                return False
        return True

    def _until(self, phi, t) -> bool:
        # exists t1 in I: phi2 at t + t1 and phi1 throughout (t, t + t1)
        i = phi.interval
        cells = _cells(self._local_points(phi, t))
        for c in cells:
            x = c.rep
            if not _member(i, x - t) or not self.sat(phi.right, x):
                continue
            if self._forall(phi.left, cells, t, False, x, False):
                return True
        return False

    def _window_ok(self, phi, cells, t, x) -> bool:
        """phi2 at every t + t2 with t2 in I and t2 <= x - t."""
        i = phi.interval
        if i.is_empty:
            return True
        lo = t + i.lo
        if is_finite(i.hi) and t + i.hi <= x:
            hi, hi_closed = t + i.hi, i.hi_closed
        else:
            hi, hi_closed = x, True
        if hi < lo:
            return True
        return self._forall(phi.right, cells, lo, i.lo_closed, hi, hi_closed)

    def _release(self, phi, t) -> bool:
        i = phi.interval
        cells = _cells(self._local_points(phi, t))
        # every t1 in I sees phi2
        if i.is_empty:
            return True
        hi = t + i.hi if is_finite(i.hi) else None
        if self._forall(phi.right, cells, t + i.lo, i.lo_closed, hi, i.hi_closed):
            return True
        # some t1 > 0 sees phi1, with phi2 on [0, t1] ∩ I
        for c in cells:
            x = c.rep
            if x > t and self.sat(phi.left, x) and self._window_ok(phi, cells, t, x):
                return True
        if not self.new:
            return False
        # some t1 in closeL(I) and t2 in I, t2 > t1: phi2 on I up to t1,
        # phi1 on (t1, t2]
        close_left = i.close_left()
        for c in cells:
            y1 = c.rep
            if not _member(close_left, y1 - t):
                continue
            if not self._window_ok(phi, cells, t, y1):
                continue
            inner = _cells(self._local_points(phi, t, extra=(y1,)))
            for d in inner:
                y2 = d.rep
                if y2 <= y1 or not _member(i, y2 - t):
                    continue
                if self._forall(phi.left, inner, y1, False, y2, True):
                    return True
        return False


def oracle_sat(signal, phi: Formula, t, sem) -> bool:
    """Does the signal shifted by ``t`` satisfy ``phi``?  Brute force."""
    return Oracle(signal, sem).sat(phi, t)


def critical_grid(oracle: Oracle, phi: Formula, extra=()) -> list:
    """The grid of ``phi`` and of its subformulas plus ``extra`` points,
    together with the midpoint of every gap and one point past the end."""
    pts = set(oracle.grid(phi)) | {Fraction(x) for x in extra if x >= 0}
    pts = sorted(pts)
    out = list(pts)
    out.extend((a + b) / 2 for a, b in zip(pts, pts[1:]))
    out.append(pts[-1] + 1)
    return sorted(out)
