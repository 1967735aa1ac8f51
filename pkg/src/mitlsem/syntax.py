"""ASCII concrete syntax: a recursive-descent parser and a printer.

Grammar, loosest binding first::

    impl     := or ( "->" impl )?
    or       := and ( "|" and )*
    and      := temporal ( "&" temporal )*
    temporal := ("F" | "G") interval? temporal
              | unary ( ("U" | "R") interval? temporal )?
    unary    := "!" unary | "N" unary | "true" | "false" | atom | "(" impl ")"

The sugar operators ``F``/``G``/``N`` are expanded while parsing.  A missing interval
means (0, inf).  The printer folds those patterns back.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .formula import (
    UNBOUNDED,
    And,
    Atom,
    Bottom,
    Formula,
    Not,
    Or,
    Release,
    Top,
    Until,
)
from .intervals import Interval, format_time, parse_time

KEYWORDS = {"U", "R", "F", "G", "N", "true", "false"}

_NUMBER = r"(?:\d+(?:/\d+|\.\d*)?|\.\d+)"
_INTERVAL_RE = re.compile(
    r"([\[(])\s*(" + _NUMBER + r")\s*,\s*(" + _NUMBER + r"|inf)\s*([\])])"
)
_NEG_INTERVAL_RE = re.compile(r"[\[(]\s*-")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class ParseError(ValueError):
    def __init__(self, message: str, position: int, expected=()):
        self.message = message
        self.position = position
        self.expected = tuple(expected)
        detail = f"{message} at position {position}"
        if self.expected:
            detail += " (expected " + ", ".join(self.expected) + ")"
        super().__init__(detail)


@dataclass
class _Token:
    kind: str  # "op", "ident", "kw", "interval", "end"
    text: str
    pos: int
    value: object = None


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    prev = None
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch in "[(" and prev is not None and prev.kind == "kw" and prev.text in "URFG":
            m = _INTERVAL_RE.match(text, pos)
            if m:
                lo, hi = parse_time(m.group(2)), parse_time(m.group(3))
                if lo > hi:
                    raise ParseError("malformed interval (lower bound above upper)", pos)
                iv = Interval(lo, hi, m.group(1) == "[", m.group(4) == "]")
                prev = _Token("interval", m.group(0), pos, iv)
                tokens.append(prev)
                pos = m.end()
                continue
            if _NEG_INTERVAL_RE.match(text, pos):
                raise ParseError("negative interval bound", pos)
            if ch == "[":
                raise ParseError("malformed interval", pos)
        if text.startswith("->", pos):
            prev = _Token("op", "->", pos)
            tokens.append(prev)
            pos += 2
            continue
        if ch in "!&|()":
            prev = _Token("op", ch, pos)
            tokens.append(prev)
            pos += 1
            continue
        m = _IDENT_RE.match(text, pos)
        if m:
            word = m.group(0)
            prev = _Token("kw" if word in KEYWORDS else "ident", word, pos)
            tokens.append(prev)
            pos = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", pos)
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text == text

    def advance(self) -> _Token:
        tok = self.tok
        self.i += 1
        return tok

    def fail(self, expected):
        tok = self.tok
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"unexpected {what}", tok.pos, expected)

    def interval(self) -> Interval:
        if self.tok.kind == "interval":
            return self.advance().value
        return UNBOUNDED

    def parse(self) -> Formula:
        phi = self.impl()
        if self.tok.kind != "end":
            self.fail(["operator", "end of input"])
        return phi

    def impl(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.advance()
            return Or(Not(left), self.impl())
        return left

    def disj(self) -> Formula:
        phi = self.conj()
        while self.at("|"):
            self.advance()
            phi = Or(phi, self.conj())
        return phi

    def conj(self) -> Formula:
        phi = self.temporal()
        while self.at("&"):
            self.advance()
            phi = And(phi, self.temporal())
        return phi

    def temporal(self) -> Formula:
        if self.at("F") or self.at("G"):
            op = self.advance().text
            iv = self.interval()
            body = self.temporal()
            return Until(Top(), body, iv) if op == "F" else Release(Bottom(), body, iv)
        left = self.unary()
        if self.at("U") or self.at("R"):
            op = self.advance().text
            iv = self.interval()
            right = self.temporal()
            return Until(left, right, iv) if op == "U" else Release(left, right, iv)
        return left

    def unary(self) -> Formula:
        tok = self.tok
        if self.at("!"):
            self.advance()
            return Not(self.unary())
        if self.at("N"):
            self.advance()
            body = self.unary()
            return Release(body, body, UNBOUNDED)
        if self.at("true"):
            self.advance()
            return Top()
        if self.at("false"):
            self.advance()
            return Bottom()
        if tok.kind == "ident":
            self.advance()
            return Atom(tok.text)
        if self.at("("):
            self.advance()
            phi = self.impl()
            if not self.at(")"):
                self.fail(["')'"])
            self.advance()
            return phi
        self.fail(["atom", "'!'", "'N'", "'('", "true", "false"])


def parse(text: str) -> Formula:
    """Parse the ASCII syntax into a core formula tree."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing


def _interval_suffix(i: Interval) -> str:
    if i == UNBOUNDED:
        return ""
    return "{}{},{}{}".format(
        "[" if i.lo_closed else "(",
        format_time(i.lo),
        format_time(i.hi),
        "]" if i.hi_closed else ")",
    )


def _is_next(phi) -> bool:
    return isinstance(phi, Release) and phi.left == phi.right and phi.interval == UNBOUNDED


def _is_unary_level(phi) -> bool:
    return isinstance(phi, (Top, Bottom, Atom, Not)) or _is_next(phi)


def _operand(phi) -> str:
    text = to_text(phi)
    return text if _is_unary_level(phi) else f"({text})"


def to_text(phi: Formula) -> str:
    """Print ``phi`` so that :func:`parse` gives back the same tree."""
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Not):
        return "!" + _operand(phi.arg)
    if isinstance(phi, Or):
        return f"{_operand(phi.left)} | {_operand(phi.right)}"
    if isinstance(phi, And):
        return f"{_operand(phi.left)} & {_operand(phi.right)}"
    if _is_next(phi):
        return "N " + _operand(phi.left)
    suffix = _interval_suffix(phi.interval)
    if isinstance(phi, Until):
        if isinstance(phi.left, Top):
            return f"F{suffix} {_operand(phi.right)}"
        return f"{_operand(phi.left)} U{suffix} {_operand(phi.right)}"
    if isinstance(phi, Release):
        if isinstance(phi.left, Bottom):
            return f"G{suffix} {_operand(phi.right)}"
        return f"{_operand(phi.left)} R{suffix} {_operand(phi.right)}"
    raise TypeError(f"not a formula: {phi!r}")


print_formula = to_text
