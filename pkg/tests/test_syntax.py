import pytest
from hypothesis import given

from conftest import formulas
from mitlsem.formula import (
    UNBOUNDED,
    And,
    Atom,
    Bottom,
    Not,
    Or,
    Release,
    Top,
    Until,
)
from mitlsem.intervals import Interval
from mitlsem.syntax import ParseError, parse, to_text

p, q = Atom("p"), Atom("q")
I = Interval.parse

REQUEST_RESPONSE = "G (req -> (F[0,5) resp | (G[0,5) !resp & F(5,5.1] error)))"


def test_until_with_interval():
    assert parse("p U[1,2] q") == Until(p, q, I("[1,2]"))


def test_next_expands_to_release():
    assert parse("N q") == Release(q, q, UNBOUNDED)


def test_derived_operators():
    assert parse("F[0,3] p") == Until(Top(), p, I("[0,3]"))
    assert parse("G p") == Release(Bottom(), p, UNBOUNDED)
    assert parse("p U q") == Until(p, q, UNBOUNDED)
    assert parse("p -> q") == Or(Not(p), q)


def test_request_response_formula():
    phi = parse(REQUEST_RESPONSE)
    assert isinstance(phi, Release) and phi.left == Bottom() and phi.interval == UNBOUNDED
    body = phi.right
    assert body.left == Not(Atom("req"))
    assert I("(5,51/10]") in {n.interval for n in [body.right.right.right]}
    assert parse(to_text(phi)) == phi


def test_precedence():
    assert parse("!p & q | p") == Or(And(Not(p), q), p)
    assert parse("p U q & q") == And(Until(p, q, UNBOUNDED), q)
    assert parse("p U q U p") == Until(p, Until(q, p, UNBOUNDED), UNBOUNDED)
    assert parse("N !p") == Release(Not(p), Not(p), UNBOUNDED)


def test_printer_examples():
    assert to_text(Until(p, q, I("[1,2]"))) == "p U[1,2] q"
    assert to_text(Not(p)) == "!p"
    assert to_text(Or(And(p, q), p)) == "(p & q) | p"
    assert to_text(Release(q, q, UNBOUNDED)) == "N q"
    assert to_text(Until(Top(), p, I("(0,3]"))) == "F(0,3] p"


@pytest.mark.parametrize(
    "text, position",
    [("p U(", 4), ("p &", 3), ("(p", 2), ("p q", 2), ("p U[-1,2] q", 3), ("p # q", 2)],
)
def test_parse_errors_carry_positions(text, position):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.position == position


def test_empty_input_rejected():
    with pytest.raises(ParseError):
        parse("   ")


@given(formulas)
def test_print_parse_round_trip(phi):
    assert parse(to_text(phi)) == phi
