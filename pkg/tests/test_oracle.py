from fractions import Fraction as F

from hypothesis import given

from conftest import EX2_SIGNAL, signals
from mitlsem.formula import Atom
from mitlsem.oracle import Oracle, critical_grid, oracle_sat
from mitlsem.semantics import Semantics
from mitlsem.signals import Signal, validate
from mitlsem.intervals import Interval
from mitlsem.syntax import parse

OLD, NEW = Semantics.OLD, Semantics.NEW


@given(signals)
def test_atoms_read_the_signal(f):
    for prop in ("p", "q"):
        assert oracle_sat(f, Atom(prop), 0, NEW) == (prop in f.value_at(0))


def test_example_until_false():
    assert not oracle_sat(EX2_SIGNAL, parse("p U(0,2) q"), 0, OLD)


def test_example_release_semantics_differ():
    phi = parse("!p R(0,2) !q")
    assert not oracle_sat(EX2_SIGNAL, phi, 0, OLD)
    assert oracle_sat(EX2_SIGNAL, phi, 0, NEW)


def test_point_segment_is_seen():
    f = validate([
        (Interval.parse("[0,1)"), set()),
        (Interval.point(1), {"q"}),
        (Interval.parse("(1,inf)"), set()),
    ])
    assert oracle_sat(f, parse("F[1,1] q"), 0, NEW)
    assert not oracle_sat(f, parse("F(1,2] q"), 0, NEW)
    assert oracle_sat(f, parse("F[1/2,1] q"), F(1, 4), NEW)


def test_strict_until_ignores_the_present():
    f = Signal.constant({"q"})
    # q holds now and later, p never: only a zero offset can help
    assert oracle_sat(f, parse("p U[0,1] q"), 0, NEW)
    assert not oracle_sat(f, parse("p U(0,1] q"), 0, NEW)


def test_empty_window_is_vacuous():
    f = Signal.constant(())
    assert oracle_sat(f, parse("G(2,2) p"), 0, NEW)


def test_grid_contains_shifted_breakpoints():
    orc = Oracle(EX2_SIGNAL, NEW)
    grid = critical_grid(orc, parse("F[1/2,3/4] q"))
    assert F(1, 2) in grid and F(1, 4) in grid and F(1) in grid
