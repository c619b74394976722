"""Connections on X/S, their curvature, and the connection-complex differentials.

A connection is ``du_i (d/du_i + xi_i)`` with relative vector fields
``xi_i``.  Operators act on states with coefficients in the base de Rham
complex; ``du`` multiplication is applied on the left after the
derivation part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterable

from .cartan import VectorField, cl_d, cl_iota, cl_lie, d_ch, iota_ch, lie_ch, vf_bracket
from .report import Check, CheckGroup, compare
from .superjet import (
    Kind,
    State,
    base_degree,
    base_derivative,
    du_times,
    homogeneous_part,
)
from .vertex import nprod


@dataclass(frozen=True, eq=False)
class Connection:
    n_dim: int
    m_dim: int
    xi: dict = field(default_factory=dict)

    def __post_init__(self):
        for i, v in self.xi.items():
            if not 1 <= i <= self.m_dim:
                raise ValueError(f"connection component {i} outside 1..{self.m_dim}")
            for j in v.components:
                if j > self.n_dim:
                    raise ValueError(f"vector field index {j} exceeds N={self.n_dim}")
            for f in v.components.values():
                for g in f.generators():
                    if g.kind == Kind.X and g.index > self.n_dim:
                        raise ValueError(f"{g} exceeds N={self.n_dim}")
                    if g.kind == Kind.U and g.index > self.m_dim:
                        raise ValueError(f"{g} exceeds M={self.m_dim}")

    def component(self, i: int) -> VectorField:
        return self.xi.get(i, VectorField())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Connection):
            return NotImplemented
        return (self.n_dim, self.m_dim) == (other.n_dim, other.m_dim) and all(
            self.component(i) == other.component(i) for i in range(1, self.m_dim + 1)
        )

    def __hash__(self) -> int:
        return hash((self.n_dim, self.m_dim, tuple(self.component(i) for i in range(1, self.m_dim + 1))))

    def __sub__(self, other: "Connection") -> dict:
        _same_shape(self, other)
        return {i: self.component(i) - other.component(i) for i in range(1, self.m_dim + 1)}


def _same_shape(c1: Connection, c2: Connection) -> None:
    if (c1.n_dim, c1.m_dim) != (c2.n_dim, c2.m_dim):
        raise ValueError(f"mismatched dimensions: (N, M) = {(c1.n_dim, c1.m_dim)} vs {(c2.n_dim, c2.m_dim)}")


def flat(n_dim: int, m_dim: int) -> Connection:
    return Connection(n_dim, m_dim, {})


def u_derivative(i: int, v: VectorField) -> VectorField:
    return v.map(lambda f: base_derivative(i, f))


def curvature(c: Connection) -> dict:
    """R_ij = d_ui xi_j - d_uj xi_i + [xi_i, xi_j] for i < j."""
    out = {}
    for i in range(1, c.m_dim + 1):
        for j in range(i + 1, c.m_dim + 1):
            xi_i, xi_j = c.component(i), c.component(j)
            out[(i, j)] = u_derivative(i, xi_j) - u_derivative(j, xi_i) + vf_bracket(xi_i, xi_j)
    return out


def curvature_component(r: dict, i: int, j: int) -> VectorField:
    if i == j:
        return VectorField()
    if i < j:
        return r[(i, j)]
    return -r[(j, i)]


def bianchi_check(c: Connection) -> Check:
    """sum over cyclic (i,j,k) of d_ui R_jk + [xi_i, R_jk] vanishes."""
    r = curvature(c)
    group = CheckGroup("bianchi")
    for i in range(1, c.m_dim + 1):
        for j in range(i + 1, c.m_dim + 1):
            for k in range(j + 1, c.m_dim + 1):
                total = VectorField()
                for a, b, cc in ((i, j, k), (j, k, i), (k, i, j)):
                    rbc = curvature_component(r, b, cc)
                    total = total + u_derivative(a, rbc) + vf_bracket(c.component(a), rbc)
                group.add(Check(f"bianchi {i}{j}{k}", not total.components, None if not total.components else {"sum": str(total)}))
    return group.result()


@dataclass(frozen=True)
class ConnectionOperator:
    """Linear endomorphism of states presented as a function."""

    fn: Callable[[State], State]
    description: str = ""

    def __call__(self, s: State) -> State:
        return self.fn(s)

    def then(self, other: "ConnectionOperator") -> "ConnectionOperator":
        """other after self."""
        return ConnectionOperator(lambda s: other(self(s)), f"{other.description} o {self.description}")


def _linear(fn: Callable[[State], State]) -> Callable[[State], State]:
    """Extend fn from monomials by linearity, remembering each monomial's image."""
    cache: dict = {}

    def apply(s: State) -> State:
        out: dict = {}
        for m, c in s.terms.items():
            img = cache.get(m)
            if img is None:
                img = cache[m] = fn(State.monomial(m))
            for mm, v in img.terms.items():
                w = out.get(mm, 0) + c * v
                if w:
                    out[mm] = w
                else:
                    out.pop(mm, None)
        return State._raw(out)

    return apply


def _add(*ops: Callable[[State], State]) -> Callable[[State], State]:
    def apply(s: State) -> State:
        out: dict = {}
        for op in ops:
            for m, v in op(s).terms.items():
                w = out.get(m, 0) + v
                if w:
                    out[m] = w
                else:
                    out.pop(m, None)
        return State._raw(out)

    return apply


def _u_part(m_dim: int) -> Callable[[State], State]:
    """sum_i du_i d/du_i, the base half of Lie_nabla."""
    return _linear(lambda s: sum((du_times(i, base_derivative(i, s)) for i in range(1, m_dim + 1)), State.zero()))


# ---------------------------------------------------------------- classical


@lru_cache(maxsize=16)
def lie_nabla_classical(c: Connection) -> ConnectionOperator:
    def fn(w: State) -> State:
        total = State.zero()
        for i in range(1, c.m_dim + 1):
            inner = base_derivative(i, w) + cl_lie(c.component(i), w, c.n_dim)
            total = total + du_times(i, inner)
        return total

    return ConnectionOperator(_linear(fn), "Lie_nabla")


@lru_cache(maxsize=16)
def iota_curvature_classical(c: Connection) -> ConnectionOperator:
    r = curvature(c)

    def fn(w: State) -> State:
        total = State.zero()
        for (i, j), v in r.items():
            if v:
                total = total + du_times(i, du_times(j, cl_iota(v, w)))
        return total

    return ConnectionOperator(_linear(fn), "iota_R")


@lru_cache(maxsize=16)
def d_classical(c: Connection) -> ConnectionOperator:
    """D = Lie_nabla + d_{X/S} - iota_R on relative forms with base-form coefficients."""
    lie, iota = lie_nabla_classical(c), iota_curvature_classical(c)
    return ConnectionOperator(_linear(lambda w: lie(w) + cl_d(w, c.n_dim) - iota(w)), "D_nabla")


# ---------------------------------------------------------------- chiral


@lru_cache(maxsize=16)
def lie_nabla_chiral(c: Connection) -> ConnectionOperator:
    fields = {i: lie_ch(c.component(i), c.n_dim) for i in range(1, c.m_dim + 1)}

    def fn(s: State) -> State:
        total = State.zero()
        for i, a in fields.items():
            total = total + du_times(i, nprod(a, 0, s))
        return total

    return ConnectionOperator(_add(_u_part(c.m_dim), _linear(fn)), "Lie^ch_nabla(0)")


@lru_cache(maxsize=16)
def d_chiral_zero_mode(n_dim: int) -> ConnectionOperator:
    d = d_ch(n_dim)
    return ConnectionOperator(_linear(lambda s: nprod(d, 0, s)), "d^ch(0)")


def _curvature_states(c: Connection, builder) -> dict:
    return {ij: builder(v) for ij, v in curvature(c).items() if v}


@lru_cache(maxsize=16)
def iota_curvature_chiral(c: Connection) -> ConnectionOperator:
    fields = _curvature_states(c, iota_ch)

    def fn(s: State) -> State:
        total = State.zero()
        for (i, j), a in fields.items():
            total = total + du_times(i, du_times(j, nprod(a, 0, s)))
        return total

    return ConnectionOperator(_linear(fn), "iota^ch_R(0)")


@lru_cache(maxsize=16)
def lie_curvature_chiral(c: Connection) -> ConnectionOperator:
    fields = _curvature_states(c, lambda v: lie_ch(v, c.n_dim))

    def fn(s: State) -> State:
        total = State.zero()
        for (i, j), a in fields.items():
            total = total + du_times(i, du_times(j, nprod(a, 0, s)))
        return total

    return ConnectionOperator(_linear(fn), "Lie^ch_R(0)")


@lru_cache(maxsize=16)
def d_chiral(c: Connection) -> ConnectionOperator:
    """D^ch = Lie^ch_nabla(0) + d^ch(0) - iota^ch_R(0)."""
    fields = {i: lie_ch(c.component(i), c.n_dim) for i in range(1, c.m_dim + 1)}
    iotas = _curvature_states(c, iota_ch)
    d = d_ch(c.n_dim)

    def fn(s: State) -> State:
        total = nprod(d, 0, s)
        for i, a in fields.items():
            total = total + du_times(i, nprod(a, 0, s))
        for (i, j), a in iotas.items():
            total = total - du_times(i, du_times(j, nprod(a, 0, s)))
        return total

    return ConnectionOperator(_add(_u_part(c.m_dim), _linear(fn)), "D^ch_nabla")


# ---------------------------------------------------------------- gluing


def _exp(theta: Callable[[State], State], s: State, limit: int = 64) -> State:
    total = s
    term = s
    k = 0
    while True:
        k += 1
        if k > limit:
            raise RuntimeError("exponential did not truncate")
        term = theta(term).scale(Fraction(1, k))
        if not term:
            return total
        total = total + term


@lru_cache(maxsize=16)
def iota_difference(c1: Connection, c2: Connection, classical: bool = False) -> ConnectionOperator:
    """theta = du_i iota_{xi2_i - xi1_i} (zero mode in the chiral case); even and nilpotent."""
    diff = c2 - c1
    if classical:
        def fn(s: State) -> State:
            total = State.zero()
            for i, v in diff.items():
                if v:
                    total = total + du_times(i, cl_iota(v, s))
            return total
    else:
        states = {i: iota_ch(v) for i, v in diff.items() if v}

        def fn(s: State) -> State:
            total = State.zero()
            for i, a in states.items():
                total = total + du_times(i, nprod(a, 0, s))
            return total

    return ConnectionOperator(_linear(fn), "iota_(nabla2 - nabla1)")


@lru_cache(maxsize=16)
def glue(c1: Connection, c2: Connection, classical: bool = False) -> ConnectionOperator:
    """exp(iota_{nabla2 - nabla1}) : complex for c1 -> complex for c2."""
    _same_shape(c1, c2)
    theta = iota_difference(c1, c2, classical)
    # every application of theta adds a du, so the series stops at degree M+1
    return ConnectionOperator(_linear(lambda s: _exp(theta, s, limit=c1.m_dim + 2)), "G")


def differential(c: Connection, classical: bool) -> ConnectionOperator:
    return d_classical(c) if classical else d_chiral(c)


def check_square_zero(c: Connection, samples: Iterable[State], classical: bool = False) -> Check:
    D = differential(c, classical)
    group = CheckGroup("D^2 = 0" + (" (classical)" if classical else ""))
    for s in samples:
        group.add(compare("D^2 s = 0", D(D(s)), State.zero(), s=s))
    return group.result()


def check_intertwine(c1: Connection, c2: Connection, samples: Iterable[State], classical: bool = False) -> Check:
    G = glue(c1, c2, classical)
    D1, D2 = differential(c1, classical), differential(c2, classical)
    G_inv = glue(c2, c1, classical)
    group = CheckGroup("intertwine" + (" (classical)" if classical else ""))
    for s in samples:
        group.add(compare("G D1 s = D2 G s", G(D1(s)), D2(G(s)), s=s))
        group.add(compare("G21 G12 s = s", G_inv(G(s)), s, s=s))
    return group.result()


def check_cocycle(c1: Connection, c2: Connection, c3: Connection, samples: Iterable[State], classical: bool = False) -> Check:
    G21, G32, G31 = glue(c1, c2, classical), glue(c2, c3, classical), glue(c1, c3, classical)
    t12, t23 = iota_difference(c1, c2, classical), iota_difference(c2, c3, classical)
    group = CheckGroup("cocycle" + (" (classical)" if classical else ""))
    for s in samples:
        group.add(compare("theta12 theta23 = theta23 theta12", t12(t23(s)), t23(t12(s)), s=s))
        group.add(compare("G31 = G32 G21", G31(s), G32(G21(s)), s=s))
    return group.result()


def check_degree_decomposition(c: Connection, samples: Iterable[State], classical: bool = False) -> Check:
    """D splits into pieces raising du-degree by 0, 1, 2; the degree-0 piece is d_{X/S}."""
    D = differential(c, classical)
    lie = lie_nabla_classical(c) if classical else lie_nabla_chiral(c)
    iota = iota_curvature_classical(c) if classical else iota_curvature_chiral(c)
    d0 = (lambda s: cl_d(s, c.n_dim)) if classical else d_chiral_zero_mode(c.n_dim)
    group = CheckGroup("du-degree decomposition")
    for s in samples:
        degs = {base_degree(m) for m in s.terms}
        if len(degs) != 1:
            continue
        p = degs.pop()
        out = D(s)
        for shift, piece in ((0, d0(s)), (1, lie(s)), (2, -iota(s))):
            group.add(compare(f"degree +{shift}", homogeneous_part(out, base_degree, p + shift), piece, s=s))
        group.add(compare("no other degrees", sum((homogeneous_part(out, base_degree, p + k) for k in range(3)), State.zero()), out, s=s))
    return group.result()


def check_proof_identities(c: Connection, samples: Iterable[State]) -> Check:
    """The three bracket identities behind (D^ch)^2 = 0."""
    L = lie_nabla_chiral(c)
    d0 = d_chiral_zero_mode(c.n_dim)
    I = iota_curvature_chiral(c)
    LR = lie_curvature_chiral(c)
    group = CheckGroup("square-zero proof identities")
    for s in samples:
        # odd operators: [A, B] = AB + BA
        group.add(compare("[Lie_nabla, Lie_nabla] = 2 Lie_R", L(L(s)).scale(2), LR(s).scale(2), s=s))
        group.add(compare("[d, iota_R] = Lie_R", d0(I(s)) + I(d0(s)), LR(s), s=s))
        group.add(compare("[Lie_nabla, iota_R] = 0", L(I(s)) + I(L(s)), State.zero(), s=s))
    return group.result()


def clear_caches() -> None:
    for f in (lie_nabla_classical, iota_curvature_classical, d_classical, lie_nabla_chiral, d_chiral_zero_mode,
              iota_curvature_chiral, lie_curvature_chiral, d_chiral, iota_difference, glue):
        f.cache_clear()
