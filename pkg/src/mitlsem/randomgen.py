"""Seeded random formulas and intervals for the property suites."""

from __future__ import annotations

import random
from fractions import Fraction

from .formula import And, Atom, Bottom, Not, Or, Release, Top, Until
from .intervals import INF, Interval


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_interval(seed, max_end=3, denominator=2, bounded=False, positive=False) -> Interval:
    """A non-negative interval on the 1/denominator lattice.

    Degenerate shapes such as singletons or unbounded intervals show up
    unless ``bounded``/``positive`` rule them out.  ``positive`` means a non-empty
    bounded interval with inf > 0 (the shape the step-size results need).
    """
    rng = _rng(seed)
    top = int(max_end * denominator)
    if positive:
        lo = rng.randint(1, top)
        hi = rng.randint(lo, top + denominator)
        if hi == lo:
            return Interval.point(Fraction(lo, denominator))
        return Interval(
            Fraction(lo, denominator),
            Fraction(hi, denominator),
            rng.random() < 0.5,
            rng.random() < 0.5,
        )
    roll = rng.random()
    if roll < 0.15 and not bounded:
        return Interval(Fraction(rng.randint(0, top), denominator), INF, rng.random() < 0.5, False)
    if roll < 0.2:
        return Interval(0, INF, False, False) if not bounded else Interval(0, 1, False, True)
    lo = rng.randint(0, top)
    hi = rng.randint(lo, top + denominator)
    return Interval(
        Fraction(lo, denominator),
        Fraction(hi, denominator),
        rng.random() < 0.5,
        rng.random() < 0.5,
    )


def random_formula(seed, max_depth=4, props=("p", "q"), **interval_kw):
    """A random formula of depth at most ``max_depth`` over ``props``."""
    rng = _rng(seed)

    def leaf():
        roll = rng.random()
        if roll < 0.06:
            return Top()
        if roll < 0.12:
            return Bottom()
        return Atom(rng.choice(props))

    def go(d):
        if d <= 1 or rng.random() < 0.2:
            return leaf()
        roll = rng.random()
        if roll < 0.15:
            return Not(go(d - 1))
        if roll < 0.3:
            return Or(go(d - 1), go(d - 1))
        if roll < 0.45:
            return And(go(d - 1), go(d - 1))
        iv = random_interval(rng, **interval_kw)
        cls = Until if roll < 0.7 else Release
        return cls(go(d - 1), go(d - 1), iv)

    return go(max_depth)


def instance_rng(seed, index) -> random.Random:
    """The generator behind instance ``index`` of the run seeded with ``seed``.

    Each instance gets its own stream, so a failure can be replayed from the
    pair alone without regenerating the instances before it.
    """
    return random.Random(f"{seed}:{index}")


def random_instance(seed, index, max_depth=4, max_segments=6, **interval_kw):
    """A (signal, formula) pair, reproducible from ``(seed, index)``."""
    from .signals import random_signal

    rng = instance_rng(seed, index)
    f = random_signal(rng, max_segments=max_segments)
    phi = random_formula(rng, max_depth=max_depth, **interval_kw)
    return f, phi
