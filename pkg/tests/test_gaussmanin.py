import random

import pytest
from hypothesis import given, settings

from chical import gaussmanin as gm
from chical.cartan import VectorField, cl_d, cl_iota, cl_lie, d_ch, iota_ch, lie_ch
from chical.gaussmanin import Connection
from chical.sampling import form_monomials, random_state, state_monomials
from chical.superjet import DU, DX, State, U, X, base_derivative
from chical.vertex import nprod
from strategies import connections

ONE = State.one()
EXAMPLE = Connection(2, 2, {1: VectorField({1: X(1) * U(2)})})
FORMS = form_monomials(2, 2, 3)


def _sample_states(seed, k=40):
    rng = random.Random(seed)
    return [random_state(rng, 2, 3, 2, m_dim=2) for _ in range(k)]


def test_curvature_examples():
    assert gm.curvature(EXAMPLE) == {(1, 2): VectorField({1: -X(1)})}
    assert not gm.curvature(gm.flat(2, 2))[(1, 2)]
    same = VectorField({1: X(2), 2: X(1) * X(1)})
    assert not gm.curvature(Connection(2, 2, {1: same, 2: same}))[(1, 2)]


@given(connections(m_dim=3))
def test_bianchi(c):
    assert gm.bianchi_check(c).passed


def test_classical_d_examples():
    assert gm.d_classical(gm.flat(1, 1))(X(1)) == DX(1)
    c = Connection(1, 1, {1: VectorField({1: X(1)})})
    assert gm.d_classical(c)(X(1)) == DX(1) + DU(1) * X(1)


@settings(max_examples=10)
@given(connections())
def test_classical_square_zero(c):
    assert gm.check_square_zero(c, FORMS, classical=True).passed


@settings(max_examples=5)
@given(connections(max_degree=1))
def test_chiral_square_zero_sampled(c):
    assert gm.check_square_zero(c, _sample_states(1)).passed
    assert gm.check_degree_decomposition(c, _sample_states(2)).passed
    assert gm.check_proof_identities(c, _sample_states(3, 10)).passed


def test_curvature_example_on_spanning_set():
    states = state_monomials(2, 2, 3, 2)
    assert len(states) == 4089
    assert gm.check_square_zero(EXAMPLE, states).passed


def test_chiral_d_matches_formula():
    """du applied on the left after the derivation, curvature term subtracted."""
    rng = random.Random(11)
    c = EXAMPLE
    D = gm.d_chiral(c)
    r = gm.curvature(c)

    def direct(s):
        out = nprod(d_ch(2), 0, s)
        for i in (1, 2):
            out = out + DU(i) * (base_derivative(i, s) + nprod(lie_ch(c.component(i), 2), 0, s))
        for (i, j), v in r.items():
            if v:
                out = out - DU(i) * DU(j) * nprod(iota_ch(v), 0, s)
        return out

    for _ in range(30):
        s = random_state(rng, 2, 4, 2, m_dim=2)
        assert D(s) == direct(s)


def test_wrong_curvature_sign_fails():
    D = gm.d_chiral(EXAMPLE)
    iota = gm.iota_curvature_chiral(EXAMPLE)

    def mutant(s):
        return D(s) + iota(s).scale(2)

    states = state_monomials(2, 2, 2, 1)
    assert any(mutant(mutant(s)) for s in states)


def test_classical_d_formula():
    c = Connection(2, 2, {1: VectorField({1: X(1) * U(2)}), 2: VectorField({2: X(1)})})
    D = gm.d_classical(c)
    w = U(1) * X(1) * DX(2)
    expect = cl_d(w, 2) - DU(1) * DU(2) * cl_iota(gm.curvature(c)[(1, 2)], w)
    for i in (1, 2):
        expect = expect + DU(i) * (base_derivative(i, w) + cl_lie(c.component(i), w, 2))
    assert D(w) == expect


def test_glue_identity_and_truncation():
    c = EXAMPLE
    G = gm.glue(c, c)
    for s in _sample_states(4, 10):
        assert G(s) == s
    c1 = gm.flat(1, 1)
    c2 = Connection(1, 1, {1: VectorField({1: ONE})})
    G = gm.glue(c1, c2)
    assert G(DX(1)) == DX(1) + DU(1)
    assert G(X(1)) == X(1)


def test_intertwine_constant_shift():
    c1 = EXAMPLE
    c2 = Connection(2, 2, {1: VectorField({1: X(1) * U(2) + ONE})})
    states = state_monomials(2, 2, 2, 1)
    assert gm.check_intertwine(c1, c2, states).passed
    assert gm.check_intertwine(c1, c2, FORMS, classical=True).passed


@settings(max_examples=4)
@given(connections(max_degree=1), connections(max_degree=1), connections(max_degree=1))
def test_glue_random(c1, c2, c3):
    states = _sample_states(5, 25)
    assert gm.check_intertwine(c1, c2, states).passed
    assert gm.check_cocycle(c1, c2, c3, states).passed
    assert gm.check_intertwine(c1, c2, FORMS, classical=True).passed
    assert gm.check_cocycle(c1, c2, c3, FORMS, classical=True).passed


def test_glue_rejects_mismatched_shapes():
    with pytest.raises(ValueError):
        gm.glue(gm.flat(2, 2), gm.flat(2, 1))


def test_connection_validation():
    with pytest.raises(ValueError):
        Connection(2, 1, {2: VectorField({1: ONE})})
    with pytest.raises(ValueError):
        Connection(2, 1, {1: VectorField({3: ONE})})
    with pytest.raises(ValueError):
        Connection(2, 1, {1: VectorField({1: U(2)})})
    assert Connection(2, 1, {}) == gm.flat(2, 1)
    assert hash(Connection(2, 1, {})) == hash(gm.flat(2, 1))
