"""Cartan calculus on relative forms and its chiral lift.

Vector fields are ``sum_i f_i d/dx_i`` with coefficients polynomial in the
jet-0 coordinates ``x(i,0)`` and the base variables ``u(i)``.  Forms are
polynomials in ``x(i,0)``, ``dx(i,0)``, ``u(i)``, ``du(i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .report import Check, CheckGroup, compare
from .superjet import Generator, Kind, State, partial, render
from .vertex import nprod, pole_bound

_ALLOWED_COEFF = frozenset({Kind.X, Kind.U})
_ALLOWED_FORM = frozenset({Kind.X, Kind.DX, Kind.U, Kind.DU})


def x0(i: int) -> Generator:
    return Generator(Kind.X, i, 0)


def dx0(i: int) -> Generator:
    return Generator(Kind.DX, i, 0)


def _p(i: int) -> State:
    return State.generator(Generator(Kind.PX, i, 0))


def _pd(i: int) -> State:
    return State.generator(Generator(Kind.PDX, i, 0))


def _dx(i: int) -> State:
    return State.generator(dx0(i))


@dataclass(frozen=True)
class VectorField:
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for i, f in self.components.items():
            if i < 1:
                raise ValueError(f"vector field index {i} must be positive")
            for g in f.generators():
                if g.kind not in _ALLOWED_COEFF or g.jet != 0:
                    raise ValueError(f"coefficient letter {g} not allowed in a vector field")
            if f:
                clean[i] = f
        object.__setattr__(self, "components", clean)

    def __getitem__(self, i: int) -> State:
        return self.components.get(i, State.zero())

    def indices(self) -> list:
        return sorted(self.components)

    def __add__(self, other: "VectorField") -> "VectorField":
        keys = set(self.components) | set(other.components)
        return VectorField({i: self[i] + other[i] for i in keys})

    def __neg__(self) -> "VectorField":
        return VectorField({i: -f for i, f in self.components.items()})

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def scale(self, c) -> "VectorField":
        return VectorField({i: f.scale(c) for i, f in self.components.items()})

    def map(self, fn) -> "VectorField":
        return VectorField({i: fn(f) for i, f in self.components.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, VectorField) and self.components == other.components

    def __hash__(self) -> int:
        return hash(frozenset(self.components.items()))

    def __bool__(self) -> bool:
        return bool(self.components)

    def __str__(self) -> str:
        return render_vector_field(self)


def render_vector_field(v: VectorField) -> str:
    if not v.components:
        return "0"
    return " + ".join(f"({render(v[i])}) d({i})" for i in v.indices())


def _dims(*fields: VectorField) -> int:
    n = 0
    for v in fields:
        if v.components:
            n = max(n, max(v.components), _coordinate_dims(*v.components.values()))
    return n


def _coordinate_dims(*states: State) -> int:
    n = 0
    for s in states:
        for g in s.generators():
            if g.kind in (Kind.X, Kind.DX, Kind.PX, Kind.PDX):
                n = max(n, g.index)
    return n


def vf_bracket(xi: VectorField, eta: VectorField) -> VectorField:
    """[f_i d_i, g_j d_j] = (f_i dg_j/dx_i - g_i df_j/dx_i) d_j."""
    out = {}
    for j in set(xi.components) | set(eta.components):
        total = State.zero()
        for i, f in xi.components.items():
            total = total + f * partial(x0(i), eta[j])
        for i, g in eta.components.items():
            total = total - g * partial(x0(i), xi[j])
        out[j] = total
    return VectorField(out)


def divergence(xi: VectorField) -> State:
    total = State.zero()
    for i, fi in xi.components.items():
        total = total + partial(x0(i), fi)
    return total


def vf_apply(xi: VectorField, f: State) -> State:
    total = State.zero()
    for i, fi in xi.components.items():
        total = total + fi * partial(x0(i), f)
    return total


# ---------------------------------------------------------------- classical


def cl_lie(xi: VectorField, omega: State, n: int | None = None) -> State:
    """Lie derivative: f_i d/dx_i + (df_i/dx_a) dx_a d/d(dx_i)."""
    n = n or max(_dims(xi), _coordinate_dims(omega))
    total = State.zero()
    for i, fi in xi.components.items():
        total = total + fi * partial(x0(i), omega)
        d_omega = partial(dx0(i), omega)
        if not d_omega:
            continue
        for a in range(1, n + 1):
            dfi = partial(x0(a), fi)
            if dfi:
                total = total + dfi * _dx(a) * d_omega
    return total


def cl_iota(xi: VectorField, omega: State) -> State:
    """Contraction f_i d/d(dx_i); an odd derivation."""
    total = State.zero()
    for i, fi in xi.components.items():
        total = total + fi * partial(dx0(i), omega)
    return total


def cl_d(omega: State, n: int | None = None) -> State:
    """Relative de Rham differential dx_i d/dx_i."""
    n = n or _coordinate_dims(omega)
    total = State.zero()
    for i in range(1, n + 1):
        total = total + _dx(i) * partial(x0(i), omega)
    return total


def check_form(omega: State) -> None:
    for g in omega.generators():
        if g.kind not in _ALLOWED_FORM or g.jet != 0:
            raise ValueError(f"letter {g} is not allowed in a form")


# ---------------------------------------------------------------- chiral


def lie_ch(xi: VectorField, n: int | None = None) -> State:
    """p_i f_i - pd_i (df_i/dx_a) dx_a."""
    n = n or _dims(xi)
    total = State.zero()
    for i, fi in xi.components.items():
        total = total + _p(i) * fi
        for a in range(1, n + 1):
            dfi = partial(x0(a), fi)
            if dfi:
                total = total - _pd(i) * dfi * _dx(a)
    return total


def iota_ch(xi: VectorField) -> State:
    """pd_i f_i."""
    total = State.zero()
    for i, fi in xi.components.items():
        total = total + _pd(i) * fi
    return total


def d_ch(n: int) -> State:
    """p_i dx_i summed over the N coordinates."""
    total = State.zero()
    for i in range(1, n + 1):
        total = total + _p(i) * _dx(i)
    return total


def zero_mode(a: State):
    return lambda b: nprod(a, 0, b)


def embed_form(omega: State) -> State:
    """Forms sit inside the chiral algebra as the same polynomial."""
    check_form(omega)
    return omega


def symbol_vector_field(xi: VectorField) -> State:
    """The fiberwise-linear function p_i f_i."""
    total = State.zero()
    for i, fi in xi.components.items():
        total = total + _p(i) * fi
    return total


# ---------------------------------------------------------------- checks


def check_lie_ch_ope(xi: VectorField, eta: VectorField, n_dim: int | None = None) -> Check:
    n_dim = n_dim or max(1, _dims(xi, eta))
    a, b = lie_ch(xi, n_dim), lie_ch(eta, n_dim)
    group = CheckGroup("lie-ch ope")
    for n in range(1, max(pole_bound(a, b), 2) + 1):
        group.add(compare(f"Lie_xi (n={n}) Lie_eta = 0", nprod(a, n, b), State.zero(), xi=xi, eta=eta))
    group.add(
        compare("Lie_xi (0) Lie_eta = Lie_[xi,eta]", nprod(a, 0, b), lie_ch(vf_bracket(xi, eta), n_dim), xi=xi, eta=eta)
    )
    return group.result()


def even_anomaly(xi: VectorField, eta: VectorField) -> State:
    """-sum_{i,j} (df_i/dx_j)(dg_j/dx_i)."""
    total = State.zero()
    for i, fi in xi.components.items():
        for j, gj in eta.components.items():
            total = total - partial(x0(j), fi) * partial(x0(i), gj)
    return total


def check_even_anomaly(xi: VectorField, eta: VectorField) -> Check:
    """In the purely even algebra the double pole of p f (z1) o p g (z2) survives."""
    a, b = symbol_vector_field(xi), symbol_vector_field(eta)
    return compare("even double pole", nprod(a, 1, b), even_anomaly(xi, eta), xi=xi, eta=eta)


def check_cartan_relations(xi: VectorField, eta: VectorField, samples: Iterable[State], n_dim: int | None = None) -> Check:
    n_dim = n_dim or max(1, _dims(xi, eta))
    samples = list(samples)
    L_xi, L_eta = lie_ch(xi, n_dim), lie_ch(eta, n_dim)
    I_xi, I_eta = iota_ch(xi), iota_ch(eta)
    d = d_ch(n_dim)
    br = vf_bracket(xi, eta)
    group = CheckGroup("cartan")
    group.add(compare("Lie_xi (0) iota_eta = iota_[xi,eta]", nprod(L_xi, 0, I_eta), iota_ch(br), xi=xi, eta=eta))
    for n in range(1, max(pole_bound(L_xi, I_eta), 1) + 1):
        group.add(compare(f"Lie_xi ({n}) iota_eta = 0", nprod(L_xi, n, I_eta), State.zero(), xi=xi, eta=eta))
    group.add(compare("d (0) iota_xi = Lie_xi", nprod(d, 0, I_xi), L_xi, xi=xi))
    # the double pole d_(1) iota_xi is the divergence of xi, not zero
    group.add(compare("d (1) iota_xi = div xi", nprod(d, 1, I_xi), divergence(xi), xi=xi))
    group.add(compare("d (0) Lie_xi = 0", nprod(d, 0, L_xi), State.zero(), xi=xi))
    group.add(compare("d (0) d = 0", nprod(d, 0, d), State.zero()))
    for n in range(0, max(pole_bound(I_xi, I_eta), 1) + 1):
        group.add(compare(f"iota_xi ({n}) iota_eta = 0", nprod(I_xi, n, I_eta), State.zero(), xi=xi, eta=eta))
    for s in samples:
        # zero-mode operator identities; Lie is even, iota and d are odd
        lhs = nprod(L_xi, 0, nprod(I_eta, 0, s)) - nprod(I_eta, 0, nprod(L_xi, 0, s))
        group.add(compare("[Lie_xi(0), iota_eta(0)] = iota_[xi,eta](0)", lhs, nprod(iota_ch(br), 0, s), xi=xi, eta=eta, s=s))
        lhs = nprod(L_xi, 0, nprod(L_eta, 0, s)) - nprod(L_eta, 0, nprod(L_xi, 0, s))
        group.add(compare("[Lie_xi(0), Lie_eta(0)] = Lie_[xi,eta](0)", lhs, nprod(lie_ch(br, n_dim), 0, s), xi=xi, eta=eta, s=s))
        lhs = nprod(I_xi, 0, nprod(I_eta, 0, s)) + nprod(I_eta, 0, nprod(I_xi, 0, s))
        group.add(compare("[iota_xi(0), iota_eta(0)] = 0", lhs, State.zero(), xi=xi, eta=eta, s=s))
        lhs = nprod(d, 0, nprod(I_xi, 0, s)) + nprod(I_xi, 0, nprod(d, 0, s))
        group.add(compare("[d(0), iota_xi(0)] = Lie_xi(0)", lhs, nprod(L_xi, 0, s), xi=xi, s=s))
        lhs = nprod(d, 0, nprod(L_xi, 0, s)) - nprod(L_xi, 0, nprod(d, 0, s))
        group.add(compare("[d(0), Lie_xi(0)] = 0", lhs, State.zero(), xi=xi, s=s))
        group.add(compare("d(0)^2 = 0", nprod(d, 0, nprod(d, 0, s)), State.zero(), s=s))
    return group.result()


def check_classical_relations(xi: VectorField, eta: VectorField, forms: Iterable[State], n_dim: int | None = None) -> Check:
    n_dim = n_dim or max(1, _dims(xi, eta))
    br = vf_bracket(xi, eta)
    group = CheckGroup("classical cartan")

    def L(v, w):
        return cl_lie(v, w, n_dim)

    def D(w):
        return cl_d(w, n_dim)

    for w in forms:
        group.add(compare("d^2 = 0", D(D(w)), State.zero(), omega=w))
        group.add(compare("Lie = d iota + iota d", L(xi, w), D(cl_iota(xi, w)) + cl_iota(xi, D(w)), xi=xi, omega=w))
        group.add(
            compare(
                "[Lie_xi, iota_eta] = iota_[xi,eta]",
                L(xi, cl_iota(eta, w)) - cl_iota(eta, L(xi, w)),
                cl_iota(br, w),
                xi=xi, eta=eta, omega=w,
            )
        )
        group.add(
            compare("[Lie_xi, Lie_eta] = Lie_[xi,eta]", L(xi, L(eta, w)) - L(eta, L(xi, w)), L(br, w), xi=xi, eta=eta, omega=w)
        )
        group.add(
            compare("[iota_xi, iota_eta] = 0", cl_iota(xi, cl_iota(eta, w)) + cl_iota(eta, cl_iota(xi, w)), State.zero(), omega=w)
        )
        group.add(compare("[d, Lie_xi] = 0", D(L(xi, w)) - L(xi, D(w)), State.zero(), xi=xi, omega=w))
    return group.result()


def check_comparison(xi: VectorField, omega: State, n_dim: int | None = None) -> Check:
    """Zero modes of the chiral operators restrict to the classical ones on forms."""
    n_dim = n_dim or max(1, _dims(xi), _coordinate_dims(omega))
    w = embed_form(omega)
    group = CheckGroup("comparison")
    group.add(compare("Lie_xi = Lie^ch_xi(0)", embed_form(cl_lie(xi, omega, n_dim)), nprod(lie_ch(xi, n_dim), 0, w), xi=xi, omega=omega))
    group.add(compare("iota_xi = iota^ch_xi(0)", embed_form(cl_iota(xi, omega)), nprod(iota_ch(xi), 0, w), xi=xi, omega=omega))
    group.add(compare("d = d^ch(0)", embed_form(cl_d(omega, n_dim)), nprod(d_ch(n_dim), 0, w), omega=omega))
    return group.result()


def check_loop_modes(xi: VectorField, eta: VectorField, samples: Iterable[State], modes=range(-2, 3), n_dim: int | None = None) -> Check:
    """Loop-algebra relations at general modes:
    [Lie_xi(n), iota_eta(m)] = iota_[xi,eta](n+m), [iota_xi(n), iota_eta(m)] = 0,
    [d(0), iota_xi(n)] = Lie_xi(n)."""
    n_dim = n_dim or max(1, _dims(xi, eta))
    L_xi, I_xi, I_eta = lie_ch(xi, n_dim), iota_ch(xi), iota_ch(eta)
    I_br = iota_ch(vf_bracket(xi, eta))
    d = d_ch(n_dim)
    group = CheckGroup("loop modes")
    modes = list(modes)
    for s in samples:
        for n in modes:
            for m in modes:
                lhs = nprod(L_xi, n, nprod(I_eta, m, s)) - nprod(I_eta, m, nprod(L_xi, n, s))
                group.add(compare(f"[Lie({n}), iota({m})]", lhs, nprod(I_br, n + m, s), s=s))
                lhs = nprod(I_xi, n, nprod(I_eta, m, s)) + nprod(I_eta, m, nprod(I_xi, n, s))
                group.add(compare(f"[iota({n}), iota({m})]", lhs, State.zero(), s=s))
            lhs = nprod(d, 0, nprod(I_xi, n, s)) + nprod(I_xi, n, nprod(d, 0, s))
            group.add(compare(f"[d(0), iota({n})]", lhs, nprod(L_xi, n, s), s=s))
    return group.result()
