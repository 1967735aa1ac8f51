from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import EX2_SIGNAL, formulas, interval_sets, signals
from mitlsem.formula import And, Atom, Bottom, Not, Or, Release, Top, Until, children, next_, nnf
from mitlsem.intervals import ALL_TIME, EMPTY, INF, Interval, IntervalSet
from mitlsem.oracle import Oracle, critical_grid
from mitlsem.semantics import (
    Semantics,
    Side,
    bridge_check,
    duality_check,
    fvar_at,
    next_truth_set,
    previous_truth_set,
    sat,
    truth_set,
    truth_sets,
)
from mitlsem.signals import Signal, random_signal
from mitlsem.syntax import parse

OLD, NEW = Semantics.OLD, Semantics.NEW
S = IntervalSet.parse


# -- the separating example -----------------------------------------------


def test_until_false_on_example():
    assert truth_set(EX2_SIGNAL, parse("p U(0,2) q"), OLD) == EMPTY


def test_old_release_false_on_example():
    assert truth_set(EX2_SIGNAL, parse("!p R(0,2) !q"), OLD) == EMPTY


def test_new_release_true_on_example():
    got = truth_set(EX2_SIGNAL, parse("!p R(0,2) !q"), NEW)
    assert 0 in got
    assert got == ALL_TIME


def test_negated_until_everywhere():
    for sem in (OLD, NEW):
        assert truth_set(EX2_SIGNAL, parse("!(p U(0,2) q)"), sem) == ALL_TIME


def test_sat_examples():
    assert sat(EX2_SIGNAL, parse("!(p U(0,2) q)"), OLD)
    assert sat(EX2_SIGNAL, parse("!p R(0,2) !q"), NEW)
    for sem in (OLD, NEW):
        assert not sat(EX2_SIGNAL, Bottom(), sem)
        assert truth_set(EX2_SIGNAL, Top(), sem) == ALL_TIME


def test_duality_report_on_example():
    phi = parse("!(p U(0,2) q)")
    old = duality_check(EX2_SIGNAL, phi, OLD)
    assert not old.equal and old.mismatch == ALL_TIME
    assert duality_check(EX2_SIGNAL, phi, NEW).equal


def test_duality_without_negation_is_trivial():
    phi = parse("p U[0,1] (q | p)")
    for sem in (OLD, NEW):
        assert duality_check(EX2_SIGNAL, phi, sem).equal


def test_bridge_on_example():
    rep = bridge_check(EX2_SIGNAL, parse("!p R(0,2) !q"))
    assert rep.equal and rep.set_new == ALL_TIME
    assert bridge_check(EX2_SIGNAL, Atom("p")).equal


# -- frozen truth sets (values taken from the pointwise oracle) ------------

FROZEN = [
    # signal: p on [0,1], q on (1,inf)
    ("p U[1,2] q", "new", "{}"),
    ("p U q", "new", "{}"),
    ("p U[0,1] q", "new", "(1,inf)"),
    # q only starts right after 1, so at 0 the old release cannot hand over
    ("q R[1,2] p", "old", "(0,inf)"),
    ("q R[1,2] p", "new", "[0,inf)"),
    ("q R(0,1] p", "new", "[0,inf)"),
    ("N p", "new", "[0,1)"),
    ("N q", "new", "[1,inf)"),
    ("F[1,2] q", "new", "[0,inf)"),
    ("G[0,1] p", "new", "[0,0]"),
]


@pytest.mark.parametrize("text, sem, expected", FROZEN)
def test_frozen_truth_sets(text, sem, expected):
    phi = parse(text)
    got = truth_set(EX2_SIGNAL, phi, Semantics(sem))
    assert got == S(expected)
    orc = Oracle(EX2_SIGNAL, Semantics(sem))
    for t in critical_grid(orc, phi):
        assert (t in got) == orc.sat(phi, t)


# -- next and finite variability ------------------------------------------


def test_next_truth_set_examples():
    assert next_truth_set(S("[0,1]")) == S("[0,1)")
    assert next_truth_set(S("(1,3)")) == S("[1,3)")
    assert next_truth_set(EMPTY) == EMPTY
    assert next_truth_set(S("[2,2]")) == EMPTY


def test_previous_truth_set_examples():
    assert previous_truth_set(S("[0,1)")) == S("(0,1]")
    assert previous_truth_set(S("[2,2]")) == EMPTY


def test_fvar_examples():
    assert fvar_at(S("[0,1] U [2,3]"), 1, Side.RIGHT)
    assert fvar_at(S("(1,2)"), 1, Side.RIGHT)
    with pytest.raises(ValueError):
        fvar_at(S("(1,2)"), 0, Side.LEFT)


@given(interval_sets)
def test_finite_sets_are_finitely_variable(s):
    for r in s.breakpoints() + [F(0)]:
        if r < 0:
            continue
        assert fvar_at(s, r, Side.RIGHT)
        if r > 0:
            assert fvar_at(s, r, Side.LEFT)


# -- properties over random pairs -----------------------------------------


@given(signals, formulas)
def test_duality_new(f, phi):
    assert truth_set(f, phi, NEW) == truth_set(f, nnf(phi), NEW)


@given(signals, formulas)
def test_bridge(f, phi):
    assert bridge_check(f, phi).equal


@given(signals, formulas, st.sampled_from([OLD, NEW]))
def test_engine_matches_oracle(f, phi, sem):
    sets = truth_sets(f, phi, sem)
    orc = Oracle(f, sem)
    grid = critical_grid(orc, phi)
    for sub, s in sets.items():
        for t in grid:
            assert (t in s) == orc.sat(sub, t), (sub, t)


def _drop_releases(phi):
    if isinstance(phi, Release):
        return Until(_drop_releases(phi.right), _drop_releases(phi.left), phi.interval)
    if isinstance(phi, (Until, And, Or)):
        return type(phi)(*(_drop_releases(c) for c in children(phi)), *(
            (phi.interval,) if isinstance(phi, Until) else ()))
    if isinstance(phi, Not):
        return Not(_drop_releases(phi.arg))
    return phi


@given(signals, formulas)
def test_until_same_in_both_semantics(f, phi):
    phi = _drop_releases(phi)
    assert truth_set(f, phi, OLD) == truth_set(f, phi, NEW)


@given(signals, formulas, st.sampled_from([OLD, NEW]))
def test_truth_sets_finitely_variable(f, phi, sem):
    s = truth_set(f, phi, sem)
    for r in s.breakpoints():
        assert fvar_at(s, r, Side.RIGHT)
        if r > 0:
            assert fvar_at(s, r, Side.LEFT)


@given(signals, formulas, st.sampled_from([OLD, NEW]),
       st.fractions(min_value=F(1, 8), max_value=8, max_denominator=8))
def test_next_operator(f, phi, sem, k):
    base = truth_set(f, phi, sem)
    assert truth_set(f, next_(phi), sem) == next_truth_set(base)
    bounded = Release(phi, phi, Interval(0, k, False, False))
    assert truth_set(f, bounded, sem) == next_truth_set(base)


def test_unsatisfiable_next_combination():
    phi = parse("N q & (!p R(0,1) !q) & (p R(0,1) !q)")
    for seed in range(300):
        f = random_signal(seed)
        for sem in (OLD, NEW):
            assert truth_set(f, phi, sem) == EMPTY
