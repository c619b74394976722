"""Spanning sets and seeded random instances for the verification suites."""

from __future__ import annotations

import random
from itertools import combinations_with_replacement

from .superjet import BASE_KINDS, Generator, Kind, State, mono_mul

COEFFS = (-3, -2, -1, 1, 2, 3)
JET_ALPHABET = (Kind.X, Kind.PX, Kind.DX, Kind.PDX)


def alphabet(n_dim: int, m_dim: int = 0, max_jet: int = 0, kinds=JET_ALPHABET, base: bool = True) -> list:
    letters = [Generator(k, i, j) for k in kinds for i in range(1, n_dim + 1) for j in range(max_jet + 1)]
    if base:
        letters += [Generator(k, i, 0) for k in BASE_KINDS for i in range(1, m_dim + 1)]
    return sorted(letters)


def all_monomials(letters, max_letters: int) -> list:
    """Every normal-form monomial with at most ``max_letters`` letters (vacuum included)."""
    out = []
    for r in range(max_letters + 1):
        for combo in combinations_with_replacement(letters, r):
            m = ()
            ok = True
            for g in combo:
                sign, m = mono_mul(m, ((g, 1),))
                if not sign:
                    ok = False
                    break
            if ok:
                out.append(State.monomial(m))
    return out


def form_monomials(n_dim: int, m_dim: int, max_letters: int) -> list:
    return all_monomials(alphabet(n_dim, m_dim, 0, kinds=(Kind.X, Kind.DX)), max_letters)


def state_monomials(n_dim: int, m_dim: int, max_letters: int, max_jet: int) -> list:
    return all_monomials(alphabet(n_dim, m_dim, max_jet), max_letters)


def random_monomial(rng: random.Random, letters, max_letters: int, min_letters: int = 0) -> State:
    while True:
        s = State.scalar(rng.choice(COEFFS))
        for _ in range(rng.randint(min_letters, max_letters)):
            s = s * State.generator(rng.choice(letters))
        if s:
            return s


def random_state(rng: random.Random, n_dim: int = 2, max_letters: int = 4, max_jet: int = 2,
                 terms: int = 2, homogeneous: bool = True, m_dim: int = 0) -> State:
    """Sum of up to ``terms`` random monomials; parity-homogeneous when asked."""
    letters = alphabet(n_dim, m_dim, max_jet)
    first = random_monomial(rng, letters, max_letters)
    total = first
    want = _parity_of(first)
    for _ in range(rng.randint(0, terms - 1)):
        extra = random_monomial(rng, letters, max_letters)
        if homogeneous and _parity_of(extra) != want:
            continue
        total = total + extra
    return total if total else first


def _parity_of(s: State) -> int:
    (m, _), = list(s.items())[:1]
    return sum(1 for g, _ in m if g.odd) & 1


def random_polynomial(rng: random.Random, variables, max_degree: int = 2, terms: int = 3) -> State:
    total = State.zero()
    for _ in range(rng.randint(1, terms)):
        t = State.scalar(rng.choice(COEFFS))
        for _ in range(rng.randint(0, max_degree)):
            t = t * State.generator(rng.choice(variables))
        total = total + t
    return total


def random_vector_field(rng: random.Random, n_dim: int = 2, max_degree: int = 2, m_dim: int = 0, density: float = 0.8):
    from .cartan import VectorField

    variables = [Generator(Kind.X, i, 0) for i in range(1, n_dim + 1)]
    variables += [Generator(Kind.U, i, 0) for i in range(1, m_dim + 1)]
    comps = {}
    for i in range(1, n_dim + 1):
        if rng.random() < density:
            comps[i] = random_polynomial(rng, variables, max_degree)
    return VectorField(comps)


def random_form(rng: random.Random, n_dim: int = 2, m_dim: int = 0, max_letters: int = 3) -> State:
    letters = alphabet(n_dim, m_dim, 0, kinds=(Kind.X, Kind.DX))
    total = State.zero()
    for _ in range(rng.randint(1, 2)):
        total = total + random_monomial(rng, letters, max_letters)
    return total


def random_connection(rng: random.Random, n_dim: int = 2, m_dim: int = 2, max_degree: int = 2):
    from .gaussmanin import Connection

    return Connection(n_dim, m_dim, {i: random_vector_field(rng, n_dim, max_degree, m_dim) for i in range(1, m_dim + 1)})
