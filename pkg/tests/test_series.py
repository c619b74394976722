from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chical.series import (
    ExpansionDomain,
    HorizonError,
    OpeSeries,
    binom,
    expand_inverse_difference,
    reexpand_double_pole,
    table_mul,
)
from chical.superjet import State, X
from oracles import expansion_oracle, reexpand_oracle


def test_d13_gt_d23_geometric_series():
    t = expand_inverse_difference(ExpansionDomain.D13_GT_D23, -1, 2)
    assert t == {(-1, 0): 1, (-2, 1): 1, (-3, 2): 1}


def test_d23_gt_d13_geometric_series():
    t = expand_inverse_difference(ExpansionDomain.D23_GT_D13, -1, 2)
    assert t == {(0, -1): -1, (1, -2): -1, (2, -3): -1}


@pytest.mark.parametrize("domain", list(ExpansionDomain))
def test_nonnegative_exponent_is_finite(domain):
    t = expand_inverse_difference(domain, 2, 10)
    assert len(t) == 3
    assert sorted(abs(v) for v in t.values()) == [1, 1, 2]


def test_reexpand_examples():
    assert reexpand_double_pole(0, 0, 2) == {(-1, -1): 1, (-2, 0): 1, (-3, 1): 1}
    t = reexpand_double_pole(1, 0, 3)
    assert [t.get((-j - 1, j - 2), 0) for j in range(4)] == [0, 1, 2, 3]
    assert reexpand_double_pole(0, 5, 0) == {(-1, -6): 1}


@given(st.sampled_from(list(ExpansionDomain)), st.integers(-4, 3), st.integers(0, 6))
def test_expansion_matches_sympy(domain, e, order):
    assert expand_inverse_difference(domain, e, order) == expansion_oracle(domain.value, e, order)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 6))
def test_reexpand_matches_sympy(s, t, order):
    assert reexpand_double_pole(s, t, order) == reexpand_oracle(s, t, order)


@given(st.integers(0, 8))
def test_inverse_times_difference_is_one(order):
    inv = expand_inverse_difference(ExpansionDomain.D13_GT_D23, -1, order)
    diff = {(1, 0): Fraction(1), (0, 1): Fraction(-1)}
    prod = table_mul(inv, diff)
    # exact up to the truncation edge (total degree of the second variable <= order)
    assert {k: v for k, v in prod.items() if k[1] <= order} == {(0, 0): 1}


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 6))
def test_reexpand_multiplied_back(s, t, extra):
    order = s + extra
    table = reexpand_double_pole(s, t, order)
    back = expand_inverse_difference(ExpansionDomain.D13_GT_D23, s + 1, 0)
    prod = table_mul(table, back)
    # terms fully determined by the computed range: a-exponent >= -order-1+s+1
    kept = {k: v for k, v in prod.items() if k[0] >= -order + s}
    assert kept == {(0, -t - 1): 1}


def test_binom_generalized():
    assert binom(-1, 3) == -1
    assert binom(-2, 2) == 3
    assert binom(3, 5) == 0
    assert binom(5, -1) == 0


def test_ope_series_coefficients():
    s = OpeSeries(-1, {-1: State.one()}, 0)
    assert s.coefficient(-1) == State.one()
    assert s.coefficient(0) == State.zero()
    assert s.coefficient(-5) == State.zero()
    with pytest.raises(HorizonError, match="regular part not computed"):
        s.coefficient(1)


def test_ope_series_rejects_stored_zero():
    with pytest.raises(ValueError):
        OpeSeries(-2, {-2: State.zero(), 0: X(1)}, 0)
