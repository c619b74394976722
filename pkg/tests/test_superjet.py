from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chical.superjet import (
    DU,
    DX,
    PD,
    Generator,
    Kind,
    P,
    State,
    U,
    X,
    base_derivative,
    gen,
    parity,
    parity_bit,
    partial,
    render,
    right_partial,
    translate,
)
from strategies import letters, monomials, states


def sign(a, b):
    return -1 if parity_bit(a) and parity_bit(b) else 1


@given(states(), states(), states())
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(states(), states(), states())
def test_distributive(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(states(), states())
def test_supercommutative(a, b):
    assert a * b == (b * a).scale(sign(a, b))


@given(letters())
def test_odd_letters_square_to_zero(g):
    s = State.generator(g)
    assert (s * s == State.zero()) == g.odd


@given(states(base=2))
def test_render_is_deterministic(a):
    assert render(a) == render(State(dict(a.terms)))


@given(states(), states())
def test_translate_is_derivation(a, b):
    assert translate(a * b) == translate(a) * b + a * translate(b)


@given(letters(), states(), states())
def test_partial_is_super_derivation(g, a, b):
    s = -1 if g.odd and parity_bit(a) else 1
    assert partial(g, a * b) == partial(g, a) * b + (a * partial(g, b)).scale(s)


@given(letters(), states())
def test_right_partial_matches_left(g, a):
    # for homogeneous a: d_right = (-1)^{|g|(|a|+1)} d_left
    if not a:
        return
    s = -1 if g.odd and not parity_bit(a) else 1
    assert right_partial(g, a) == partial(g, a).scale(s)


def test_translate_examples():
    assert translate(X(1)) == X(1, 1)
    assert translate(State.one()) == State.zero()
    assert translate(X(1, 1)) == X(1, 2).scale(2)
    assert translate(U(1) * DU(2)) == State.zero()


def test_sign_of_odd_reordering():
    a = DX(1) * PD(2)
    b = PD(2) * DX(1)
    assert a == -b
    assert render(a) == "dx(1,0)*pd(2,0)"


def test_parity_and_mixed():
    assert parity(X(1)) == "even"
    assert parity(DX(1)) == "odd"
    assert parity(State.zero()) == "zero"
    with pytest.raises(ValueError):
        parity_bit(X(1) + DX(1))


def test_base_derivative():
    s = U(1) ** 2 * U(2) * X(1)
    assert base_derivative(1, s) == (U(1) * U(2) * X(1)).scale(2)
    with pytest.raises(ValueError):
        base_derivative(3, s, m_dim=2)


def test_generator_validation():
    with pytest.raises(ValueError):
        gen(Kind.X, 0)
    with pytest.raises(ValueError):
        gen(Kind.X, 1, -1)
    with pytest.raises(ValueError):
        gen(Kind.U, 1, 2)


def test_generator_order():
    kinds = [Kind.U, Kind.DU, Kind.X, Kind.PX, Kind.DX, Kind.PDX]
    gs = [Generator(k, 1, 0) for k in kinds]
    assert sorted(reversed(gs)) == gs


def test_exact_rationals():
    s = X(1).scale(Fraction(1, 3)) + X(1).scale(Fraction(2, 3))
    assert s == X(1)
    assert render(X(1).scale(Fraction(-3, 6))) == "-1/2*x(1,0)"
    assert render(P(2).scale(10 ** 30)) == "1" + "0" * 30 + "*p(2,0)"


@given(monomials())
def test_zero_coefficients_never_stored(m):
    assert all(c for c in (m - m).terms.values())
    assert not (m - m)


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_scalar_arithmetic(a, b):
    assert State.scalar(a) * State.scalar(b) == State.scalar(a * b)
    assert State.scalar(a) + State.scalar(b) == State.scalar(a + b)
