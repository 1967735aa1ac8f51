"""Refuting two-variable candidate definitions of Release.

A candidate is a formula of the shape

    AND_i OR_j  exists t1 . forall t2 .  AND_k (P_ijk  =>  S_ijk)

where each ``P`` is a convex polyhedron over (t1, t2) given by linear
constraints, and each ``S`` is a disjunction of at most one propositional
test on the signal shifted by t1 and at most one on the signal shifted by t2.

:func:`refute` builds two signals that agree everywhere except on a short
interval and shows that the candidate cannot match ``!(p U_I q)`` (equivalently
``!p R_I !q`` under the corrected release) on both of them.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .formula import Atom, Formula, Not, Until
from .intervals import (
    INF,
    NEG_INF,
    Interval,
    IntervalSet,
    as_time,
    format_time,
    is_finite,
)
from .semantics import Semantics, sat, truth_set
from .signals import Signal, validate
from .syntax import parse, to_text


class RefutationError(ValueError):
    """The pipeline could not proceed (bad input or a broken invariant)."""


class NoMismatch(RefutationError):
    """The candidate agreed with the target on both constructed signals."""


_RELS = {"<": "<", "<=": "<=", "≤": "<=", ">": ">", ">=": ">=", "≥": ">="}
_NEGATED = {"<": ">=", "<=": ">", ">": "<=", ">=": "<"}
_CLOSED = {"<": "<=", "<=": "<=", ">": ">=", ">=": ">="}


def _compare(lhs, rel, rhs) -> bool:
    if rel == "<":
        return lhs < rhs
    if rel == "<=":
        return lhs <= rhs
    if rel == ">":
        return lhs > rhs
    return lhs >= rhs


@dataclass(frozen=True)
class LinearConstraint:
    """a1*t1 + a2*t2 rel b."""

    a1: Fraction
    a2: Fraction
    rel: str
    b: Fraction

    def __post_init__(self):
        for name in ("a1", "a2", "b"):
            object.__setattr__(self, name, Fraction(as_time(getattr(self, name))))
        if self.rel not in _RELS:
            raise ValueError(f"unknown relation {self.rel!r}")
        object.__setattr__(self, "rel", _RELS[self.rel])

    @property
    def is_constant(self) -> bool:
        return self.a1 == 0 and self.a2 == 0

    def holds(self, t1, t2) -> bool:
        return _compare(self.a1 * t1 + self.a2 * t2, self.rel, self.b)

    def negate(self) -> "LinearConstraint":
        return LinearConstraint(self.a1, self.a2, _NEGATED[self.rel], self.b)

    def closure(self) -> "LinearConstraint":
        return LinearConstraint(self.a1, self.a2, _CLOSED[self.rel], self.b)

    def to_json(self) -> dict:
        return {
            "a1": format_time(self.a1),
            "a2": format_time(self.a2),
            "rel": self.rel,
            "b": format_time(self.b),
        }

    def __str__(self):
        return f"{format_time(self.a1)}*t1 + {format_time(self.a2)}*t2 {self.rel} {format_time(self.b)}"


def _bound_interval(coef, rel, rhs) -> Interval:
    """Solutions x of coef * x rel rhs (coef != 0)."""
    bound = rhs / coef
    if coef < 0:
        rel = {"<": ">", "<=": ">=", ">": "<", ">=": "<="}[rel]
    if rel == "<":
        return Interval(NEG_INF, bound, False, False)
    if rel == "<=":
        return Interval(NEG_INF, bound, False, True)
    if rel == ">":
        return Interval(bound, INF, False, False)
    return Interval(bound, INF, True, False)


_REALS = Interval(NEG_INF, INF, False, False)


@dataclass(frozen=True)
class Polyhedron:
    """Conjunction of linear constraints over (t1, t2)."""

    constraints: tuple = ()
    infeasible: bool = False

    @classmethod
    def of(cls, *constraints) -> "Polyhedron":
        kept = []
        infeasible = False
        for c in constraints:
            if c.is_constant:
                if not _compare(Fraction(0), c.rel, c.b):
                    infeasible = True
                continue
            kept.append(c)
        return cls(tuple(kept), infeasible)

    def contains(self, t1, t2) -> bool:
        return not self.infeasible and all(c.holds(t1, t2) for c in self.constraints)

    def closure_constraints(self):
        return tuple(c.closure() for c in self.constraints)

    def slice_t2(self, c, closed=False) -> Interval:
        """{t2 : (c, t2) in P}, or in its closure."""
        if self.infeasible or (closed and self.is_empty()):
            return Interval.empty()
        out = _REALS
        for k in self.closure_constraints() if closed else self.constraints:
            if k.a2 == 0:
                if not _compare(k.a1 * c, k.rel, k.b):
                    return Interval.empty()
                continue
            out = out.intersect(_bound_interval(k.a2, k.rel, k.b - k.a1 * c))
        return out

    def slice_t1(self, t2, closed=False) -> Interval:
        """{t1 : (t1, t2) in P}, or in its closure."""
        if self.infeasible or (closed and self.is_empty()):
            return Interval.empty()
        out = _REALS
        for k in self.closure_constraints() if closed else self.constraints:
            if k.a1 == 0:
                if not _compare(k.a2 * t2, k.rel, k.b):
                    return Interval.empty()
                continue
            out = out.intersect(_bound_interval(k.a1, k.rel, k.b - k.a2 * t2))
        return out

    def line_crossings(self) -> list:
        """Intersection points of every pair of non-parallel constraint lines."""
        pts = []
        for k, m in combinations(self.constraints, 2):
            det = k.a1 * m.a2 - k.a2 * m.a1
            if det == 0:
                continue
            t1 = (k.b * m.a2 - k.a2 * m.b) / det
            t2 = (k.a1 * m.b - k.b * m.a1) / det
            pts.append((t1, t2))
        return pts

    def critical_t1(self) -> set:
        """t1 values at which the shape of the t2-slice can change."""
        out = {t1 for t1, _ in self.line_crossings()}
        out.update(k.b / k.a1 for k in self.constraints if k.a2 == 0)
        return out

    def is_empty(self) -> bool:
        if self.infeasible:
            return True
        pts = sorted(self.critical_t1())
        probes = list(pts) + [(a + b) / 2 for a, b in zip(pts, pts[1:])]
        probes += [pts[0] - 1, pts[-1] + 1] if pts else [Fraction(0)]
        return all(self.slice_t2(c).is_empty for c in probes)

    def vertices(self) -> list:
        """Vertices of the closure."""
        if self.is_empty():
            return []
        closed = self.closure_constraints()
        out = []
        for t1, t2 in self.line_crossings():
            if all(k.holds(t1, t2) for k in closed) and (t1, t2) not in out:
                out.append((t1, t2))
        return sorted(out)

    def flat_edges(self) -> list:
        """t2 values of closure edges lying on a line t2 = const."""
        if self.is_empty():
            return []
        out = set()
        for k in self.constraints:
            if k.a1 == 0:
                level = k.b / k.a2
                if not self.slice_t1(level, closed=True).is_empty:
                    out.add(level)
        return sorted(out)

    def to_json(self) -> list:
        cons = [c.to_json() for c in self.constraints]
        if self.infeasible:
            cons.append({"a1": "0", "a2": "0", "rel": "<", "b": "0"})
        return cons

    def __str__(self):
        if self.infeasible:
            return "{false}"
        if not self.constraints:
            return "{plane}"
        return "{" + ", ".join(str(c) for c in self.constraints) + "}"


@dataclass(frozen=True)
class SignalAtom:
    """The signal shifted by t1 (var=1) or t2 (var=2) satisfies ``psi``."""

    var: int
    psi: Formula

    def __post_init__(self):
        if self.var not in (1, 2):
            raise ValueError("var must be 1 or 2")
        if isinstance(self.psi, str):
            object.__setattr__(self, "psi", parse(self.psi))
        from .formula import Release, Until, walk

        if any(isinstance(n, (Until, Release)) for n in walk(self.psi)):
            raise ValueError("signal atoms must be propositional")

    def negate(self) -> "SignalAtom":
        return SignalAtom(self.var, Not(self.psi))

    def to_json(self) -> dict:
        return {"var": self.var, "psi": to_text(self.psi)}


@dataclass(frozen=True)
class Clause:
    """poly => (atoms[0] or atoms[1]); no atoms means poly => false."""

    poly: Polyhedron
    atoms: tuple = ()

    def __post_init__(self):
        vars_ = [a.var for a in self.atoms]
        if len(vars_) != len(set(vars_)):
            raise ValueError("at most one signal atom per variable")

    def atom(self, var) -> Optional[SignalAtom]:
        for a in self.atoms:
            if a.var == var:
                return a
        return None

    def to_json(self) -> dict:
        return {"constraints": self.poly.to_json(), "atoms": [a.to_json() for a in self.atoms]}


@dataclass(frozen=True)
class CanonicalFormula:
    """blocks[i][j] is the clause tuple of the j-th disjunct of block i."""

    blocks: tuple

    def polyhedra(self) -> list:
        out = []
        for block in self.blocks:
            for disjunct in block:
                for clause in disjunct:
                    if clause.poly not in out:
                        out.append(clause.poly)
        return out

    def to_json(self) -> dict:
        return {
            "blocks": [
                [[c.to_json() for c in disjunct] for disjunct in block] for block in self.blocks
            ]
        }

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)

    @classmethod
    def from_json(cls, data) -> "CanonicalFormula":
        try:
            return cls._from_json(data)
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed candidate formula: {exc!r}") from exc

    @classmethod
    def _from_json(cls, data) -> "CanonicalFormula":
        blocks = data["blocks"] if isinstance(data, dict) else data
        out = []
        for block in blocks:
            disjuncts = []
            for disjunct in block:
                clauses = []
                for cl in disjunct:
                    cons = [
                        LinearConstraint(
                            as_time(str(k["a1"])),
                            as_time(str(k["a2"])),
                            k["rel"],
                            as_time(str(k["b"])),
                        )
                        for k in cl.get("constraints", [])
                    ]
                    atoms = tuple(SignalAtom(int(a["var"]), a["psi"]) for a in cl.get("atoms", []))
                    clauses.append(Clause(Polyhedron.of(*cons), atoms))
                disjuncts.append(tuple(clauses))
            out.append(tuple(disjuncts))
        return cls(tuple(out))

    @classmethod
    def loads(cls, text: str) -> "CanonicalFormula":
        return cls.from_json(json.loads(text))


# ---------------------------------------------------------------------------
# deciding a candidate on a signal


class _Evaluator:
    def __init__(self, f: Signal):
        self.f = f
        self._sets = {}

    def holds_set(self, psi: Formula) -> IntervalSet:
        hit = self._sets.get(psi)
        if hit is None:
            hit = truth_set(self.f, psi, Semantics.OLD)
            self._sets[psi] = hit
        return hit

    def atom_at(self, atom: SignalAtom, t) -> bool:
        # the signal is undefined before 0; a test there fails
        return t >= 0 and t in self.holds_set(atom.psi)

    def clause_on_line(self, clause: Clause, c) -> bool:
        """Does every (c, t2) in the polyhedron satisfy the clause?"""
        j = clause.poly.slice_t2(c)
        if j.is_empty:
            return True
        a1 = clause.atom(1)
        if a1 is not None and self.atom_at(a1, c):
            return True
        a2 = clause.atom(2)
        if a2 is None:
            return False
        return self.holds_set(a2.psi).covers(j)

    def candidate_lines(self, clauses) -> list:
        cuts = set(self.f.breakpoints())
        for clause in clauses:
            poly = clause.poly
            cuts |= poly.critical_t1()
            for k in poly.constraints:
                if k.a1 == 0 or k.a2 == 0:
                    continue
                for beta in self.f.breakpoints():
                    cuts.add((k.b - k.a2 * beta) / k.a1)
        pts = sorted(cuts)
        out = list(pts)
        out.extend((a + b) / 2 for a, b in zip(pts, pts[1:]))
        out.extend((pts[0] - 1, pts[-1] + 1))
        return sorted(out)

    def disjunct_witness(self, clauses) -> Optional[Fraction]:
        for c in self.candidate_lines(clauses):
            if all(self.clause_on_line(cl, c) for cl in clauses):
                return c
        return None


def eval_canonical(phi: CanonicalFormula, f: Signal):
    """(truth value, per-block (j, c) witnesses when true)."""
    ev = _Evaluator(f)
    witnesses = []
    for block in phi.blocks:
        found = None
        for j, clauses in enumerate(block):
            c = ev.disjunct_witness(clauses)
            if c is not None:
                found = (j, c)
                break
        if found is None:
            return False, None
        witnesses.append(found)
    return True, tuple(witnesses)


def interval_constraints(var: int, i: Interval) -> list:
    """Linear constraints saying that t_var lies in ``i``."""
    a1, a2 = (1, 0) if var == 1 else (0, 1)
    out = []
    if is_finite(i.lo):
        out.append(LinearConstraint(a1, a2, ">=" if i.lo_closed else ">", i.lo))
    if is_finite(i.hi):
        out.append(LinearConstraint(a1, a2, "<=" if i.hi_closed else "<", i.hi))
    return out


def encode_old_release(i: Interval) -> CanonicalFormula:
    """The two-disjunct release of !p and !q over ``i`` in candidate shape."""
    if i.is_empty:
        raise RefutationError("interval must be non-empty")
    not_p, not_q = Not(Atom("p")), Not(Atom("q"))
    in_i = interval_constraints(2, i)
    first = (Clause(Polyhedron.of(*in_i), (SignalAtom(2, not_q),)),)
    second = (
        Clause(Polyhedron.of(LinearConstraint(1, 0, "<=", 0)), ()),
        Clause(Polyhedron.of(), (SignalAtom(1, not_p),)),
        Clause(
            Polyhedron.of(
                LinearConstraint(0, 1, ">=", 0),
                LinearConstraint(-1, 1, "<=", 0),
                *in_i,
            ),
            (SignalAtom(2, not_q),),
        ),
    )
    return CanonicalFormula(((first, second),))


# ---------------------------------------------------------------------------
# the construction


@dataclass(frozen=True)
class CornerSets:
    vertices: tuple  # (t1, t2) vertices of every polyhedron closure
    flat_edges: tuple  # t2 levels of edges along t2 = const
    c2: frozenset
    c3: frozenset


def corner_sets(phi: CanonicalFormula, i: Interval) -> CornerSets:
    verts, edges = [], []
    for poly in phi.polyhedra():
        verts.extend(poly.vertices())
        edges.extend(poly.flat_edges())
    c2 = frozenset(t2 for _, t2 in verts) | frozenset(edges)
    c3 = c2 | {i.hi} if not i.is_empty and is_finite(i.hi) else c2
    return CornerSets(tuple(sorted(set(verts))), tuple(sorted(set(edges))), c2, frozenset(c3))


def choose_r(phi: CanonicalFormula, i: Interval):
    """A point r of ``i`` away from every corner, and the margin kept."""
    if i.is_empty or i.is_singleton:
        raise RefutationError("interval must be neither empty nor a singleton")
    corners = corner_sets(phi, i).c3
    holes = IntervalSet(Interval.point(c) for c in corners)
    pieces = list(IntervalSet([i]) - holes)
    if not pieces:
        raise RefutationError("no admissible r")
    unbounded = [p for p in pieces if not is_finite(p.hi)]
    if unbounded:
        lo = unbounded[0].lo
        return lo + 1, Fraction(1, 4)
    widest = max(pieces, key=lambda p: (p.hi - p.lo, -p.lo))
    width = widest.hi - widest.lo
    return (widest.lo + widest.hi) / 2, width / 4


def _min_positive_width(poly: Polyhedron, r) -> Optional[Fraction]:
    admissible = poly.slice_t1(r, closed=True)
    if admissible.is_empty:
        return None
    probes = {x for x in (admissible.lo, admissible.hi) if is_finite(x)}
    probes.update(c for c in poly.critical_t1() if c in admissible)
    if not probes:
        # the admissible set is the whole line and no slice shape changes
        probes = {Fraction(0)}
    widths = []
    for c in probes:
        w = poly.slice_t2(c, closed=True).width
        widths.append(w)
    if any(w == 0 for w in widths) and any(w > 0 for w in widths):
        raise RefutationError(f"slice widths of {poly} shrink to zero near t2 = {r}")
    positive = [w for w in widths if w > 0 and is_finite(w)]
    return min(positive) if positive else None


def choose_delta(phi: CanonicalFormula, r, i: Interval) -> Fraction:
    r = as_time(r)
    mins = [m for m in (_min_positive_width(p, r) for p in phi.polyhedra()) if m is not None]
    candidates = []
    if mins:
        candidates.append(min(mins) / 2)
    if is_finite(i.hi):
        candidates.append((i.hi - r) / 2)
    return min(candidates) if candidates else Fraction(1)


def build_f1(r, delta) -> Signal:
    r, delta = as_time(r), as_time(delta)
    if r <= 0 or delta <= 0:
        raise RefutationError("r and delta must be positive")
    return validate(
        [
            (Interval(0, r, True, True), {"p"}),
            (Interval(r, r + delta, False, True), {"q"}),
            (Interval(r + delta, INF, False, False), {"p"}),
        ]
    )


def build_f2(r, delta, epsilon) -> Signal:
    r, delta, epsilon = as_time(r), as_time(delta), as_time(epsilon)
    if not 0 < epsilon < delta:
        raise RefutationError("need 0 < epsilon < delta")
    return validate(
        [
            (Interval(0, r + epsilon, True, False), {"p"}),
            (Interval(r + epsilon, r + delta, True, True), {"q"}),
            (Interval(r + delta, INF, False, False), {"p"}),
        ]
    )


def _delta_of(f1: Signal, r) -> Fraction:
    try:
        (a, _), (b, props), _ = f1.segments
    except ValueError as exc:
        raise RefutationError("f1 must have three segments") from exc
    if b.lo != r or props != frozenset({"q"}):
        raise RefutationError("f1 does not match r")
    return b.hi - r


def choose_epsilon(phi: CanonicalFormula, f1: Signal, r, witnesses) -> Fraction:
    """Half the smallest distance from r to anything a witness line can see."""
    r = as_time(r)
    bounds = [_delta_of(f1, r)]
    for (j, c), block in zip(witnesses or (), phi.blocks):
        if c > r:
            bounds.append(c - r)
        for clause in block[j]:
            s = clause.poly.slice_t2(c)
            if s.is_empty:
                continue
            if s.lo <= r < s.hi:
                if is_finite(s.hi):
                    bounds.append(s.hi - r)
            elif s.lo > r and is_finite(s.lo):
                bounds.append(s.lo - r)
    return min(bounds) / 2


@dataclass(frozen=True)
class RefutationReport:
    interval: Interval
    r: Fraction
    guard: Fraction
    delta: Fraction
    epsilon: Fraction
    f1: Signal
    f2: Signal
    phi_on_f1: bool
    phi_on_f2: bool
    target_on_f1: bool
    target_on_f2: bool
    mismatch_signal: int
    witnesses_f1: Optional[tuple] = None
    notes: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "interval": str(self.interval),
            "r": format_time(self.r),
            "guard": format_time(self.guard),
            "delta": format_time(self.delta),
            "epsilon": format_time(self.epsilon),
            "f1": self.f1.to_json(),
            "f2": self.f2.to_json(),
            "phi_on_f1": self.phi_on_f1,
            "phi_on_f2": self.phi_on_f2,
            "target_on_f1": self.target_on_f1,
            "target_on_f2": self.target_on_f2,
            "mismatch_signal": self.mismatch_signal,
            "notes": list(self.notes),
        }


def target_formula(i: Interval) -> Formula:
    """!(p U_i q), the property every candidate is compared against."""
    return Not(Until(Atom("p"), Atom("q"), i))


def refute(phi: CanonicalFormula, i: Interval) -> RefutationReport:
    """Build f1 and f2 and report on which one ``phi`` gets the target wrong."""
    if i.is_empty or i.is_singleton or i.lo < 0:
        raise RefutationError("interval must be non-empty, non-singleton and non-negative")
    r, guard = choose_r(phi, i)
    delta = choose_delta(phi, r, i)
    f1 = build_f1(r, delta)
    target = target_formula(i)
    on_f1, witnesses = eval_canonical(phi, f1)
    notes = []
    if on_f1 and all(
        clause.poly.slice_t2(c).is_empty
        for (j, c), block in zip(witnesses, phi.blocks)
        for clause in block[j]
    ):
        notes.append("every witnessed clause has an empty slice; epsilon is unconstrained")
    epsilon = choose_epsilon(phi, f1, r, witnesses if on_f1 else ())
    f2 = build_f2(r, delta, epsilon)
    on_f2, _ = eval_canonical(phi, f2)
    target_f1 = sat(f1, target, Semantics.OLD)
    target_f2 = sat(f2, target, Semantics.OLD)
    if not target_f1 or target_f2:
        raise RefutationError("constructed signals do not separate the target")
    if not on_f1:
        mismatch = 1
    elif on_f2:
        mismatch = 2
    else:
        raise NoMismatch(
            "candidate holds on f1 but not on f2; it is outside the two-variable shape "
            "or the construction is faulty"
        )
    return RefutationReport(
        i, r, guard, delta, epsilon, f1, f2, on_f1, on_f2, target_f1, target_f2,
        mismatch, witnesses, tuple(notes),
    )


# ---------------------------------------------------------------------------
# random candidates for property tests


def random_candidate(seed, max_blocks=2, max_disjuncts=2, max_clauses=3, max_constraints=3):
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    psis = ["p", "q", "!p", "!q", "p & q", "p | !q", "!p & !q", "true", "false"]

    def constraint():
        while True:
            a1, a2 = rng.randint(-2, 2), rng.randint(-2, 2)
            if a1 or a2:
                break
        return LinearConstraint(a1, a2, rng.choice(["<", "<=", ">", ">="]), Fraction(rng.randint(-4, 8), 2))

    def clause():
        cons = [constraint() for _ in range(rng.randint(0, max_constraints))]
        atoms = []
        for var in (1, 2):
            if rng.random() < 0.6:
                atoms.append(SignalAtom(var, rng.choice(psis)))
        return Clause(Polyhedron.of(*cons), tuple(atoms))

    return CanonicalFormula(
        tuple(
            tuple(
                tuple(clause() for _ in range(rng.randint(1, max_clauses)))
                for _ in range(rng.randint(1, max_disjuncts))
            )
            for _ in range(rng.randint(1, max_blocks))
        )
    )
