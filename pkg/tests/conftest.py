"""Shared hypothesis strategies and fixtures."""

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mitlsem.intervals import INF, Interval, IntervalSet
from mitlsem.randomgen import random_formula, random_interval
from mitlsem.signals import Signal, random_signal

settings.register_profile(
    "default", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

EX2_SIGNAL = Signal.from_json(
    [{"interval": "[0,1]", "props": ["p"]}, {"interval": "(1,inf)", "props": ["q"]}]
)


@pytest.fixture
def ex2():
    """p on [0,1], q afterwards."""
    return EX2_SIGNAL


times = st.fractions(min_value=0, max_value=8, max_denominator=6)


@st.composite
def intervals(draw, allow_infinite=True):
    lo = draw(times)
    if allow_infinite and draw(st.booleans()) and draw(st.booleans()):
        hi = INF
    else:
        hi = lo + draw(st.fractions(min_value=0, max_value=4, max_denominator=6))
    return Interval(lo, hi, draw(st.booleans()), draw(st.booleans()))


interval_sets = st.lists(intervals(), max_size=5).map(IntervalSet)
signals = st.integers(0, 10**9).map(random_signal)
formulas = st.integers(0, 10**9).map(random_formula)
seeds = st.integers(0, 10**9)
bounded_positive = st.integers(0, 10**9).map(lambda s: random_interval(s, positive=True))


def probe_points(*sets, extra=()):
    """Breakpoints of the given sets plus midpoints and a point past the end."""
    pts = {Fraction(0)} | {Fraction(x) for x in extra}
    for s in sets:
        pts.update(b for b in s.breakpoints() if b != INF and b >= 0)
    pts = sorted(pts)
    out = set(pts)
    out.update((a + b) / 2 for a, b in zip(pts, pts[1:]))
    out.add(pts[-1] + 1)
    return sorted(out)


# one line per acceptance criterion, echoed at the end of the run
VERDICTS = {}


def record(criterion: int, ok: bool, detail: str) -> bool:
    line = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    VERDICTS[criterion] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[k])
