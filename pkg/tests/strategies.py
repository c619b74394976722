"""Hypothesis strategies for states, vector fields and connections."""

from hypothesis import strategies as st

from chical.cartan import VectorField
from chical.gaussmanin import Connection
from chical.superjet import Generator, Kind, State

COEFFS = st.sampled_from([-3, -2, -1, 1, 2, 3])
JET_KINDS = [Kind.X, Kind.PX, Kind.DX, Kind.PDX]


def letters(n_dim=2, max_jet=2, base=0):
    jet = st.builds(Generator, st.sampled_from(JET_KINDS), st.integers(1, n_dim), st.integers(0, max_jet))
    if not base:
        return jet
    b = st.builds(Generator, st.sampled_from([Kind.U, Kind.DU]), st.integers(1, base), st.just(0))
    return st.one_of(jet, b)


@st.composite
def monomials(draw, n_dim=2, max_jet=2, max_letters=4, base=0):
    s = State.scalar(draw(COEFFS))
    for g in draw(st.lists(letters(n_dim, max_jet, base), max_size=max_letters)):
        s = s * State.generator(g)
    return s


@st.composite
def states(draw, n_dim=2, max_jet=2, max_letters=4, base=0, terms=2):
    """Parity-homogeneous states (possibly zero)."""
    parts = draw(st.lists(monomials(n_dim, max_jet, max_letters, base), min_size=1, max_size=terms))
    parity = None
    total = State.zero()
    for p in parts:
        if not p:
            continue
        (m, _), = list(p.terms.items())
        par = sum(1 for g, _ in m if g.odd) & 1
        if parity is None:
            parity = par
        if par == parity:
            total = total + p
    return total


@st.composite
def nonzero_states(draw, **kw):
    s = draw(states(**kw))
    if not s:
        s = State.generator(draw(letters(kw.get("n_dim", 2), kw.get("max_jet", 2))))
    return s


@st.composite
def polynomials(draw, n_dim=2, m_dim=0, max_degree=2):
    variables = [Generator(Kind.X, i, 0) for i in range(1, n_dim + 1)]
    variables += [Generator(Kind.U, i, 0) for i in range(1, m_dim + 1)]
    total = State.zero()
    for _ in range(draw(st.integers(1, 3))):
        t = State.scalar(draw(COEFFS))
        for g in draw(st.lists(st.sampled_from(variables), max_size=max_degree)):
            t = t * State.generator(g)
        total = total + t
    return total


@st.composite
def vector_fields(draw, n_dim=2, m_dim=0, max_degree=2):
    comps = {}
    for i in range(1, n_dim + 1):
        if draw(st.booleans()):
            comps[i] = draw(polynomials(n_dim, m_dim, max_degree))
    return VectorField(comps)


@st.composite
def forms(draw, n_dim=2, m_dim=0, max_letters=3):
    kinds = [Kind.X, Kind.DX] + ([Kind.U, Kind.DU] if m_dim else [])
    total = State.zero()
    for _ in range(draw(st.integers(1, 2))):
        t = State.scalar(draw(COEFFS))
        for _ in range(draw(st.integers(0, max_letters))):
            k = draw(st.sampled_from(kinds))
            bound = m_dim if k in (Kind.U, Kind.DU) else n_dim
            t = t * State.generator(Generator(k, draw(st.integers(1, bound)), 0))
        total = total + t
    return total


@st.composite
def connections(draw, n_dim=2, m_dim=2, max_degree=2):
    return Connection(n_dim, m_dim, {i: draw(vector_fields(n_dim, m_dim, max_degree)) for i in range(1, m_dim + 1)})
