"""Formula syntax trees and the purely syntactic transformations on them."""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Optional, Union

from .intervals import INF, Interval, is_finite

UNBOUNDED = Interval(0, INF, False, False)


class Formula:
    """Base class of the eight node types."""

    __slots__ = ()

    def __str__(self):
        from .syntax import to_text

        return to_text(self)

    # convenience constructors
    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self):
        return "Bottom()"


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __repr__(self):
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


def _check_decoration(interval):
    if not isinstance(interval, Interval):
        raise TypeError("temporal operators need an Interval")
    if not interval.is_empty and interval.lo < 0:
        raise ValueError(f"decoration interval must be non-negative: {interval}")


@dataclass(frozen=True, repr=False)
class Until(Formula):
    left: Formula
    right: Formula
    interval: Interval = UNBOUNDED

    def __post_init__(self):
        _check_decoration(self.interval)

    def __repr__(self):
        return f"Until({self.left!r}, {self.right!r}, '{self.interval}')"


@dataclass(frozen=True, repr=False)
class Release(Formula):
    left: Formula
    right: Formula
    interval: Interval = UNBOUNDED

    def __post_init__(self):
        _check_decoration(self.interval)

    def __repr__(self):
        return f"Release({self.left!r}, {self.right!r}, '{self.interval}')"


Temporal = Union[Until, Release]


def _cached_hash(self):
    # formulas are hashed over and over as memo keys; the generated hash
    # would walk the whole tree every time
    h = self.__dict__.get("_hash")
    if h is None:
        h = hash((type(self).__name__, *(getattr(self, f.name) for f in fields(self))))
        object.__setattr__(self, "_hash", h)
    return h


for _node in (Top, Bottom, Atom, Not, Or, And, Until, Release):
    _node.__hash__ = _cached_hash


def eventually(phi: Formula, interval: Interval = UNBOUNDED) -> Until:
    return Until(Top(), phi, interval)


def always(phi: Formula, interval: Interval = UNBOUNDED) -> Release:
    return Release(Bottom(), phi, interval)


def next_(phi: Formula) -> Release:
    """N phi: phi holds on some right-neighbourhood of the current instant."""
    return Release(phi, phi, UNBOUNDED)


def children(phi: Formula) -> tuple:
    if isinstance(phi, Not):
        return (phi.arg,)
    if isinstance(phi, (Or, And, Until, Release)):
        return (phi.left, phi.right)
    return ()


def walk(phi: Formula):
    """Pre-order traversal of the tree (shared subtrees are visited again)."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def atoms(phi: Formula) -> set:
    return {n.name for n in walk(phi) if isinstance(n, Atom)}


def depth(phi: Formula) -> int:
    kids = children(phi)
    return 1 + max((depth(k) for k in kids), default=0)


def tree_size(phi: Formula) -> int:
    return sum(1 for _ in walk(phi))


def intervals_of(phi: Formula) -> list:
    return [n.interval for n in walk(phi) if isinstance(n, (Until, Release))]


# ---------------------------------------------------------------------------
# negation normal form


def nnf(phi: Formula) -> Formula:
    """Push negations down to atoms, dualizing connectives on the way."""
    if isinstance(phi, (Top, Bottom, Atom)):
        return phi
    if isinstance(phi, Or):
        return Or(nnf(phi.left), nnf(phi.right))
    if isinstance(phi, And):
        return And(nnf(phi.left), nnf(phi.right))
    if isinstance(phi, Until):
        return Until(nnf(phi.left), nnf(phi.right), phi.interval)
    if isinstance(phi, Release):
        return Release(nnf(phi.left), nnf(phi.right), phi.interval)
    return _nnf_negated(phi.arg)


def _nnf_negated(phi: Formula) -> Formula:
    if isinstance(phi, Top):
        return Bottom()
    if isinstance(phi, Bottom):
        return Top()
    if isinstance(phi, Atom):
        return Not(phi)
    if isinstance(phi, Not):
        return nnf(phi.arg)
    if isinstance(phi, Or):
        return And(_nnf_negated(phi.left), _nnf_negated(phi.right))
    if isinstance(phi, And):
        return Or(_nnf_negated(phi.left), _nnf_negated(phi.right))
    if isinstance(phi, Until):
        return Release(_nnf_negated(phi.left), _nnf_negated(phi.right), phi.interval)
    if isinstance(phi, Release):
        return Until(_nnf_negated(phi.left), _nnf_negated(phi.right), phi.interval)
    raise TypeError(f"not a formula: {phi!r}")


def is_nnf(phi: Formula) -> bool:
    return all(isinstance(n.arg, Atom) for n in walk(phi) if isinstance(n, Not))


# ---------------------------------------------------------------------------
# expressing the corrected release with the two-disjunct one


def to_old(phi: Formula) -> Formula:
    """Rewrite ``phi`` so that evaluating it with the two-disjunct release
    gives the same truth set as ``phi`` under the three-disjunct release."""
    memo = {}

    def go(node):
        if node in memo:
            return memo[node]
        if isinstance(node, (Top, Bottom, Atom)):
            out = node
        elif isinstance(node, Not):
            out = Not(go(node.arg))
        elif isinstance(node, Or):
            out = Or(go(node.left), go(node.right))
        elif isinstance(node, And):
            out = And(go(node.left), go(node.right))
        elif isinstance(node, Until):
            out = Until(go(node.left), go(node.right), node.interval)
        else:
            a, b, i = go(node.left), go(node.right), node.interval
            n_a = next_(a)
            base = Or(Release(a, b, i), Release(n_a, b, i))
            if i.inf > 0:
                out = base
            elif not i.lo_closed:
                out = Or(base, n_a)
            else:
                out = Or(base, And(b, n_a))
        memo[node] = out
        return out

    return go(phi)


def subformulas(phi: Formula) -> set:
    return set(walk(phi))


def subformula_dag_size(phi: Formula) -> int:
    """Number of structurally distinct subformulas, ``phi`` included."""
    seen = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(children(node))
    return len(seen)


# ---------------------------------------------------------------------------
# fragments


@dataclass(frozen=True)
class FragmentReport:
    is_mtl: bool
    is_mitl: bool
    is_mitl0inf: bool
    is_mitlwi: bool
    size_bits: int
    worst_ratio: Optional[Fraction]

    @property
    def fragment(self) -> str:
        """Name of the smallest fragment containing the formula."""
        if self.is_mitl0inf:
            return "MITL0inf"
        if self.is_mitlwi:
            return "MITLwi"
        if self.is_mitl:
            return "MITL"
        return "MTL"


def _bits(x: Fraction) -> int:
    # a zero numerator still takes one digit to write down
    return max(1, abs(x.numerator).bit_length()) + x.denominator.bit_length()


def size_bits(phi: Formula) -> int:
    total = tree_size(phi)
    for i in intervals_of(phi):
        if i.is_empty:
            continue
        for end in (i.lo, i.hi):
            if is_finite(end):
                total += _bits(end)
    return total


def classify(phi: Formula) -> FragmentReport:
    ivs = intervals_of(phi)
    n = size_bits(phi)
    is_mitl = not any(i.is_singleton for i in ivs)
    zero_or_inf = all(i.is_empty or i.lo == 0 or not is_finite(i.hi) for i in ivs)
    ratios = [
        i.hi / (i.hi - i.lo)
        for i in ivs
        if not i.is_empty and 0 < i.lo < i.hi and is_finite(i.hi)
    ]
    worst = max(ratios) if ratios else None
    is_mitlwi = is_mitl and all(r <= n for r in ratios)
    return FragmentReport(
        is_mtl=True,
        is_mitl=is_mitl,
        is_mitl0inf=is_mitl and zero_or_inf,
        is_mitlwi=is_mitlwi,
        size_bits=n,
        worst_ratio=worst,
    )


# ---------------------------------------------------------------------------
# normal-form recognition

NOT_NORMAL = None


def temporal_type(phi: Formula) -> Optional[int]:
    """Shape tag 1..6 of a temporal node, or None when it fits no shape."""
    if not isinstance(phi, (Until, Release)):
        return None
    i = phi.interval
    if i.is_empty:
        return None
    bounded = is_finite(i.hi)
    zero_anchored_open = i.lo == 0 and not i.lo_closed
    if isinstance(phi, Until):
        if isinstance(phi.left, Top) and zero_anchored_open and bounded:
            return 1
        if i.lo > 0 and bounded:
            return 4
        if i == UNBOUNDED:
            return 6
        return None
    if isinstance(phi.left, Bottom) and zero_anchored_open and bounded:
        return 2
    if isinstance(phi.left, Bottom) and i == UNBOUNDED:
        return 3
    if i.lo > 0 and bounded:
        return 5
    return None


@dataclass(frozen=True)
class NormalFormReport:
    in_normal_form: bool
    tags: tuple  # (temporal subformula, tag or None) in pre-order

    def tag_of(self, phi: Formula) -> Optional[int]:
        for node, tag in self.tags:
            if node == phi:
                return tag
        raise KeyError(phi)


def normal_form_type(phi: Formula) -> NormalFormReport:
    tags = tuple((n, temporal_type(n)) for n in walk(phi) if isinstance(n, (Until, Release)))

    def ok(node):
        if isinstance(node, (Top, Bottom)):
            # true/false are accepted as constant leaves
            return True
        if isinstance(node, Atom):
            return True
        if isinstance(node, Not):
            return isinstance(node.arg, Atom)
        if isinstance(node, (And, Or)):
            return ok(node.left) and ok(node.right)
        kind = temporal_type(node)
        if kind is None:
            return False
        return ok(node.left) and ok(node.right)

    return NormalFormReport(ok(phi), tags)
