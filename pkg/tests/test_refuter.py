import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EX2_SIGNAL, seeds, signals
from mitlsem.formula import Atom, Not, Until
from mitlsem.intervals import Interval, IntervalSet, is_finite
from mitlsem.randomgen import random_interval
from mitlsem.refuter import (
    CanonicalFormula,
    Clause,
    LinearConstraint,
    NoMismatch,
    Polyhedron,
    RefutationError,
    SignalAtom,
    build_f1,
    build_f2,
    choose_delta,
    choose_epsilon,
    choose_r,
    corner_sets,
    encode_old_release,
    eval_canonical,
    random_candidate,
    refute,
    target_formula,
)
from mitlsem.semantics import Semantics, sat, truth_set
from mitlsem.signals import Signal, validate
from mitlsem.syntax import parse

I = Interval.parse
OLD = Semantics.OLD


def one_clause(*constraints, atoms=()):
    return CanonicalFormula((((Clause(Polyhedron.of(*constraints), tuple(atoms)),),),))


TRIANGLE = one_clause(
    LinearConstraint(1, 0, ">=", 0),
    LinearConstraint(0, 1, ">=", 0),
    LinearConstraint(1, 1, "<=", 2),
    atoms=[SignalAtom(2, "p")],
)
ALWAYS_FALSE = one_clause()
ALWAYS_TRUE = one_clause(atoms=[SignalAtom(1, "true")])


def changes(f: Signal, prop: str) -> int:
    values = [prop in ps for _, ps in f.segments]
    return sum(a != b for a, b in zip(values, values[1:]))


# -- building blocks ---------------------------------------------------------


def test_constraint_negation_and_closure():
    c = LinearConstraint(1, -1, "<", 2)
    assert c.negate().rel == ">=" and c.closure().rel == "<="
    assert c.holds(0, -1) and not c.holds(3, 1)
    assert SignalAtom(1, "p").negate().psi == Not(Atom("p"))


def test_constant_constraints_fold():
    assert Polyhedron.of(LinearConstraint(0, 0, "<", -1)).infeasible
    assert Polyhedron.of(LinearConstraint(0, 0, "<=", 0)).constraints == ()


def test_clause_allows_one_atom_per_variable():
    with pytest.raises(ValueError):
        Clause(Polyhedron.of(), (SignalAtom(1, "p"), SignalAtom(1, "q")))


def test_signal_atoms_are_propositional():
    with pytest.raises(ValueError):
        SignalAtom(2, "p U q")


def test_polyhedron_geometry():
    (tri,) = TRIANGLE.polyhedra()
    assert tri.vertices() == [(0, 0), (0, 2), (2, 0)]
    assert tri.flat_edges() == [0]
    assert tri.slice_t2(F(1, 2)) == I("[0,3/2]")
    strict = Polyhedron.of(LinearConstraint(1, 0, "<", 0), LinearConstraint(1, 0, ">", 0))
    assert strict.is_empty() and strict.vertices() == []


# -- evaluation ----------------------------------------------------------------


def test_eval_trivial_block():
    ok, wits = eval_canonical(one_clause(atoms=[SignalAtom(1, "p")]), Signal.constant({"p"}))
    assert ok and wits[0][1] >= 0


def test_eval_unsatisfiable_clause():
    assert eval_canonical(ALWAYS_FALSE, EX2_SIGNAL) == (False, None)


def test_old_release_encoding_examples():
    phi = encode_old_release(I("(0,2)"))
    assert eval_canonical(phi, EX2_SIGNAL)[0] is False
    assert eval_canonical(phi, Signal.constant(()))[0] is True


@given(signals, seeds)
def test_old_release_encoding_matches_engine(f, seed):
    i = random_interval(seed)
    if i.is_empty:
        return
    want = sat(f, parse(f"!p R{i} !q"), OLD)
    assert eval_canonical(encode_old_release(i), f)[0] == want


def test_negative_times_fail_signal_tests():
    phi = one_clause(LinearConstraint(0, 1, "<=", -1), atoms=[SignalAtom(2, "true")])
    # t2 ranges over negative times only, where no test holds
    assert eval_canonical(phi, Signal.constant({"p"}))[0] is False


# -- corners and the choice of r, delta ---------------------------------------------------


def test_corner_sets_examples():
    cs = corner_sets(TRIANGLE, I("(0,2)"))
    assert cs.c2 == {0, 2} and cs.c3 == {0, 2}
    assert corner_sets(ALWAYS_TRUE, I("(0,2)")).c2 == set()
    assert corner_sets(ALWAYS_TRUE, I("(0,2)")).c3 == {2}
    assert corner_sets(ALWAYS_TRUE, I("(0,inf)")).c3 == set()


def test_choose_r_examples():
    assert choose_r(TRIANGLE, I("(0,2)"))[0] == 1
    assert choose_r(ALWAYS_TRUE, I("(0,2)")) == (1, F(1, 2))
    with pytest.raises(RefutationError):
        choose_r(ALWAYS_TRUE, I("[1,1]"))


def test_choose_delta_examples():
    assert choose_delta(TRIANGLE, 1, I("(0,2)")) == F(1, 2)
    assert choose_delta(ALWAYS_TRUE, 1, I("(0,2)")) == F(1, 2)
    assert choose_delta(ALWAYS_TRUE, 1, I("(0,5)")) == 2


def delta_postcondition_holds(phi, r, delta, i, rng, samples=1000):
    if is_finite(i.hi) and not i.hi - r > delta:
        return False
    for poly in phi.polyhedra():
        admissible = poly.slice_t1(r, closed=True)
        if admissible.is_empty:
            continue
        lo = admissible.lo if is_finite(admissible.lo) else F(-20)
        hi = admissible.hi if is_finite(admissible.hi) else F(20)
        for _ in range(samples):
            c = lo + (hi - lo) * F(rng.randint(0, 4096), 4096)
            w = poly.slice_t2(c, closed=True).width
            if 0 < w <= delta:
                return False
    return True


@settings(max_examples=60)
@given(seeds)
def test_choose_r_and_delta_postconditions(seed):
    rng = random.Random(seed)
    phi = random_candidate(rng)
    i = random_interval(rng, bounded=True)
    if i.is_empty or i.is_singleton:
        return
    r, guard = choose_r(phi, i)
    assert r in i and guard > 0
    ball = IntervalSet([Interval(r - guard, r + guard)])
    assert all(c not in ball for c in corner_sets(phi, i).c3)
    delta = choose_delta(phi, r, i)
    assert delta > 0
    assert delta_postcondition_holds(phi, r, delta, i, rng, samples=100)


# -- signals -------------------------------------------------------------------


def test_build_f1_example():
    f1 = build_f1(1, F(1, 4))
    assert f1 == validate([(I("[0,1]"), {"p"}), (I("(1,5/4]"), {"q"}), (I("(5/4,inf)"), {"p"})])
    assert truth_set(f1, parse("p U(0,2) q"), OLD) == IntervalSet()
    assert changes(f1, "p") == 2 and changes(f1, "q") == 2


def test_build_f2_example():
    f2 = build_f2(1, F(1, 4), F(1, 8))
    assert f2 == validate([(I("[0,9/8)"), {"p"}), (I("[9/8,5/4]"), {"q"}), (I("(5/4,inf)"), {"p"})])
    assert sat(f2, parse("p U(0,2) q"), OLD)
    f1 = build_f1(1, F(1, 4))
    for k in range(0, 40):
        t = F(k, 16)
        if not (1 < t < 1 + F(1, 8)):
            assert f1.value_at(t) == f2.value_at(t)


def test_build_rejects_bad_parameters():
    with pytest.raises(RefutationError):
        build_f2(1, F(1, 4), F(1, 4))
    with pytest.raises(RefutationError):
        build_f1(0, 1)


def test_choose_epsilon_without_witnesses():
    f1 = build_f1(1, F(1, 2))
    assert choose_epsilon(ALWAYS_FALSE, f1, 1, ()) == F(1, 4)


# -- the pipeline -------------------------------------------------------------


def test_refute_old_release():
    rep = refute(encode_old_release(I("(0,2)")), I("(0,2)"))
    assert rep.mismatch_signal == 1
    assert (rep.phi_on_f1, rep.target_on_f1, rep.target_on_f2) == (False, True, False)
    assert len(rep.f1) == 3 and len(rep.f2) == 3
    assert (rep.r, rep.delta) == (1, F(1, 2))


def test_refute_constant_candidates():
    assert refute(ALWAYS_FALSE, I("(0,2)")).mismatch_signal == 1
    assert refute(ALWAYS_TRUE, I("(0,2)")).mismatch_signal == 2


def test_refute_triangle():
    rep = refute(TRIANGLE, I("(0,2)"))
    assert rep.mismatch_signal in (1, 2)
    assert 0 < rep.epsilon < rep.delta


def test_no_mismatch_is_an_error():
    assert issubclass(NoMismatch, RefutationError)


def epsilon_postcondition_holds(phi, r, eps, witnesses):
    window = Interval(r, r + eps, False, False)
    for (j, c), block in zip(witnesses, phi.blocks):
        if r < c < r + eps:
            return False
        for clause in block[j]:
            s = clause.poly.slice_t2(c)
            if not (window.issubset(s) or window.intersect(s).is_empty):
                return False
    return True


@settings(max_examples=100)
@given(seeds)
def test_refute_random_candidates(seed):
    rng = random.Random(seed)
    phi = random_candidate(rng)
    i = random_interval(rng, bounded=True)
    if i.is_empty or i.is_singleton:
        return
    rep = refute(phi, i)
    target = target_formula(i)
    # confirm the mismatch independently of the report
    f = rep.f1 if rep.mismatch_signal == 1 else rep.f2
    assert eval_canonical(phi, f)[0] != sat(f, target, OLD)
    for g in (rep.f1, rep.f2):
        assert changes(g, "p") <= 2 and changes(g, "q") <= 2
    if rep.phi_on_f1:
        assert epsilon_postcondition_holds(phi, rep.r, rep.epsilon, rep.witnesses_f1)


def test_candidate_json_round_trip():
    phi = encode_old_release(I("[1/2,3]"))
    assert CanonicalFormula.loads(phi.dumps()) == phi
    data = {"blocks": [[[{"constraints": [{"a1": "1", "a2": "0", "rel": "≤", "b": "1/2"}],
                          "atoms": [{"var": 2, "psi": "p&!q"}]}]]]}
    clause = CanonicalFormula.from_json(data).blocks[0][0][0]
    assert clause.poly.constraints[0] == LinearConstraint(1, 0, "<=", F(1, 2))
    assert clause.atoms[0].psi == parse("p & !q")
