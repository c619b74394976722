import pytest
from hypothesis import given

from chical.cartan import VectorField
from chical.gaussmanin import Connection
from chical.parser import (
    ParseError,
    parse,
    parse_connection,
    parse_state,
    parse_vector_field,
    render_connection,
)
from chical.superjet import DU, DX, PD, P, State, U, X, render
from strategies import connections, states, vector_fields


@given(states(base=2))
def test_state_round_trip(a):
    assert parse_state(render(a)) == a


@given(vector_fields(m_dim=2))
def test_vector_field_round_trip(v):
    assert parse_vector_field(str(v)) == v


@given(connections())
def test_connection_file_round_trip(c):
    assert parse_connection(render_connection(c)) == c


def test_grammar():
    assert parse_state("x(1)") == X(1)
    assert parse_state("2 x(1,0) p(2,1)") == (X(1) * P(2, 1)).scale(2)
    assert parse_state("-(x(1)+1)^2") == -(X(1) * X(1) + X(1).scale(2) + State.one())
    assert parse_state("1/2*u(1)*du(2)") == (U(1) * DU(2)).scale(__import__("fractions").Fraction(1, 2))
    assert parse_state("pd(1,0)*dx(1,0)") == -(DX(1) * PD(1))
    assert parse_state("0") == State.zero()


def test_vector_field_syntax():
    v = parse_vector_field("(x(1,0)^2) d(1) + x(2,0) d(2)")
    assert v == VectorField({1: X(1) * X(1), 2: X(2)})
    assert parse("x(2,0) d(1)") == VectorField({1: X(2)})
    assert parse("x(2,0)") == X(2)


@pytest.mark.parametrize("text", ["x(1", "q(1)", "x(1,0)^", "d(1)", "x(0)", "3/0", "x(1) $"])
def test_bad_states(text):
    with pytest.raises(ParseError):
        parse_state(text)


def test_error_position():
    with pytest.raises(ParseError) as exc:
        parse_state("x(1) + q(2)")
    assert exc.value.pos == 7
    assert "^" in str(exc.value)


def test_dimension_bounds():
    with pytest.raises(ParseError):
        parse_state("x(3,0)", n_dim=2)
    with pytest.raises(ParseError):
        parse_state("u(3)", m_dim=2)


def test_vector_field_rejects_bare_terms():
    with pytest.raises(ParseError):
        parse_vector_field("x(1,0) d(1) + x(2,0)")


def test_connection_file_details():
    text = "# example\nN 2\nM 2\n\nxi[1] = (x(1,0)*u(2)) d(1)  # comment\n"
    c = parse_connection(text)
    assert c == Connection(2, 2, {1: VectorField({1: X(1) * U(2)})})
    assert c.component(2) == VectorField({})
    for bad in [
        "N 2\nxi[1] = d(1)\n",
        "N 2\nM 1\nxi[2] = d(1)\n",
        "N 2\nM 1\nxi[1] = d(1)\nxi[1] = d(2)\n",
        "N 2\nN 3\nM 1\n",
        "N 2\nM 1\nfoo\n",
        "M 1\n",
    ]:
        with pytest.raises(ParseError):
            parse_connection(bad)
