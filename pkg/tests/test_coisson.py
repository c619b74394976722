import pytest
from hypothesis import given, strategies as st

from chical.cartan import VectorField, lie_ch, symbol_vector_field
from chical.coisson import (
    check_coisson_commutator,
    check_coisson_leibniz,
    check_coisson_skew,
    check_jet_bracket,
    check_quantized_leibniz,
    check_quasiclassical,
    coisson_nprod,
    filtration_degree,
    jet_lie_bracket,
    leibniz_product_sides,
    symbol,
    top_part,
)
from chical.superjet import PD, P, State, X, render
from chical.vertex import nprod
from strategies import nonzero_states, states, vector_fields

ONE = State.one()
small = dict(max_letters=3, terms=2)


def test_filtration_examples():
    assert filtration_degree(X(1)) == 0
    assert filtration_degree(P(1) * PD(2, 1)) == 2
    assert filtration_degree(lie_ch(VectorField({1: X(1) * X(2)}), 2)) == 1
    assert filtration_degree(State.zero()) == 0


def test_symbol_class_equality():
    a = X(1) * P(1) + X(1, 1)
    assert symbol(a) == symbol(X(1) * P(1))
    assert top_part(a) == X(1) * P(1)
    assert symbol(a) != symbol(X(1) * P(2))


def test_coisson_examples():
    assert coisson_nprod(P(1), 0, X(1)) == ONE
    assert coisson_nprod(P(1, 1), 2, X(1, 1)) == ONE.scale(-2)
    xi, eta = VectorField({1: X(2)}), VectorField({2: X(1)})
    got = coisson_nprod(symbol_vector_field(xi), 0, symbol_vector_field(eta))
    assert render(got) == "-x(1,0)*p(1,0)+x(2,0)*p(2,0)"
    with pytest.raises(ValueError):
        coisson_nprod(P(1), -1, X(1))


def test_anomaly_drops_under_symbol():
    a, b = symbol_vector_field(VectorField({1: X(2)})), symbol_vector_field(VectorField({2: X(1)}))
    assert nprod(a, 1, b) == -ONE
    assert coisson_nprod(a, 1, b) == State.zero()
    assert check_quasiclassical(a, b, 1).passed


def test_leibniz_worked_example():
    lhs, rhs = leibniz_product_sides(P(1), X(1), X(1), 0)
    assert lhs == rhs == X(1).scale(2)


@given(nonzero_states(**small), nonzero_states(**small), st.integers(-2, 3))
def test_quasiclassical(a, b, n):
    assert check_quasiclassical(a, b, n).passed


@given(nonzero_states(max_letters=2), nonzero_states(max_letters=2), nonzero_states(max_letters=2),
       st.integers(0, 2))
def test_coisson_leibniz(a, b, c, n):
    assert check_coisson_leibniz(a, b, c, n).passed


@given(nonzero_states(max_letters=2), nonzero_states(max_letters=2), nonzero_states(max_letters=2),
       st.integers(0, 2))
def test_quantized_leibniz(a, b, c, n):
    assert check_quantized_leibniz(a, b, c, n).passed


@given(states(**small), states(**small))
def test_coisson_skew(a, b):
    assert check_coisson_skew(a, b).passed


@given(nonzero_states(max_letters=2), nonzero_states(max_letters=2), nonzero_states(max_letters=2),
       st.integers(0, 2), st.integers(0, 2))
def test_coisson_commutator(a, b, c, n, m):
    assert check_coisson_commutator(a, b, c, n, m).passed


def test_jet_bracket_examples():
    xi, eta = VectorField({1: X(2)}), VectorField({2: X(1)})
    br = VectorField({1: -X(1), 2: X(2)})
    assert jet_lie_bracket({0: xi}, {0: eta}) == {0: {0: br}}
    # (d xi)_(1) eta = -xi_(0) eta
    assert jet_lie_bracket({1: xi}, {0: eta}) == {1: {0: -br}}


@given(st.dictionaries(st.integers(0, 2), vector_fields(), max_size=2),
       st.dictionaries(st.integers(0, 2), vector_fields(), max_size=2))
def test_jet_bracket_matches_coisson(a, b):
    assert check_jet_bracket(a, b).passed
