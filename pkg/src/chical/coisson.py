"""Momentum filtration, symbols and the coisson (vertex Poisson) limit.

The filtration degree of a state counts momentum letters p and pd.  The
coisson n-th products keep exactly one contraction in the Wick sum, so
they share all sign conventions with the quantum engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .cartan import VectorField, symbol_vector_field, vf_bracket
from .report import Check, CheckGroup, compare
from .series import binom
from .superjet import State, homogeneous_part, momentum_count, parity_bit, translate_power
from .vertex import nprod, normal_ordering_sides, pole_bound, wick_nprod


def filtration_degree(a: State) -> int:
    """Largest momentum count over the monomials of ``a`` (0 for the zero state)."""
    return max((momentum_count(m) for m in a.terms), default=0)


@dataclass(frozen=True)
class SymbolClass:
    """A state taken modulo F^{p-1}; only its degree-p part matters."""

    representative: State
    degree: int

    @property
    def top(self) -> State:
        return top_part(self.representative, self.degree)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolClass):
            return NotImplemented
        return self.degree == other.degree and self.top == other.top

    def __hash__(self) -> int:
        return hash((self.degree, self.top))


def top_part(a: State, p: int | None = None) -> State:
    """Degree-p component in the momentum grading (default: the top one)."""
    if p is None:
        p = filtration_degree(a)
    return homogeneous_part(a, momentum_count, p)


def symbol(a: State) -> SymbolClass:
    return SymbolClass(a, filtration_degree(a))


def coisson_nprod(a: State, n: int, b: State) -> State:
    """n-th coisson product, n >= 0: the single-contraction part of the Wick sum."""
    if n < 0:
        raise ValueError("coisson products are defined for n >= 0; use multiplication for n = -1")
    return wick_nprod(a, n, b, contractions=1)


def coisson_pole_bound(a: State, b: State) -> int:
    return pole_bound(a, b)


def _eps(a: State, b: State) -> int:
    return -1 if parity_bit(a) and parity_bit(b) else 1


def _scaled_translate(a: State, j: int) -> State:
    return translate_power(a, j).scale(Fraction(1, factorial(j)))


# ---------------------------------------------------------------- checks


def check_quasiclassical(a: State, b: State, n: int) -> Check:
    """Filtration bound and symbol agreement for a_(n) b."""
    p, q = filtration_degree(a), filtration_degree(b)
    group = CheckGroup(f"quasiclassical n={n}")
    out = nprod(a, n, b)
    deg = filtration_degree(out)
    if n >= 0:
        bound = p + q - 1
        group.add(Check("filtration bound", deg <= bound or not out,
                        None if deg <= bound or not out else {"degree": deg, "bound": bound}))
        group.add(compare("symbol", top_part(out, bound), coisson_nprod(top_part(a, p), n, top_part(b, q)), a=a, b=b, n=n))
    else:
        bound = p + q
        group.add(Check("filtration bound", deg <= bound or not out,
                        None if deg <= bound or not out else {"degree": deg, "bound": bound}))
        if n == -1:
            group.add(compare("top part is the product", top_part(out, bound), top_part(a, p) * top_part(b, q), a=a, b=b))
    return group.result()


def leibniz_product_sides(a: State, b: State, c: State, n: int):
    """a_(n)(bc) against (a_(n)b)c + (-1)^{|a||b|} b(a_(n)c)."""
    lhs = coisson_nprod(a, n, b * c)
    rhs = coisson_nprod(a, n, b) * c + (b * coisson_nprod(a, n, c)).scale(_eps(a, b))
    return lhs, rhs


def leibniz_left_sides(b: State, c: State, a: State, n: int, product=None):
    """(bc)_(n)a against sum_j d^j b/j! (c_(n+j)a) + (-1)^{|b||c|} sum_j d^j c/j! (b_(n+j)a)."""
    product = product or coisson_nprod
    lhs = product(b * c, n, a)
    rhs = State.zero()
    j = 0
    while n + j < pole_bound(c, a):
        rhs = rhs + _scaled_translate(b, j) * product(c, n + j, a)
        j += 1
    j = 0
    tail = State.zero()
    while n + j < pole_bound(b, a):
        tail = tail + _scaled_translate(c, j) * product(b, n + j, a)
        j += 1
    return lhs, rhs + tail.scale(_eps(b, c))


def check_coisson_leibniz(a: State, b: State, c: State, n: int) -> Check:
    group = CheckGroup(f"coisson leibniz n={n}")
    lhs, rhs = leibniz_product_sides(a, b, c, n)
    group.add(compare("a_(n)(bc)", lhs, rhs, a=a, b=b, c=c, n=n))
    lhs, rhs = leibniz_left_sides(b, c, a, n)
    group.add(compare("(bc)_(n)a", lhs, rhs, a=a, b=b, c=c, n=n))
    return group.result()


def check_quantized_leibniz(a: State, b: State, c: State, n: int) -> Check:
    """The p+q+r-1 symbol of (a_(-1)b)_(n)c equals the coisson Leibniz expansion of the symbols."""
    p, q, r = filtration_degree(a), filtration_degree(b), filtration_degree(c)
    deg = p + q + r - 1
    lhs, rhs = normal_ordering_sides(a, b, c, n)
    sa, sb, sc = top_part(a, p), top_part(b, q), top_part(c, r)
    _, classical = leibniz_left_sides(sa, sb, sc, n)
    group = CheckGroup(f"quantized leibniz n={n}")
    group.add(compare("symbol of lhs", top_part(lhs, deg), classical, a=a, b=b, c=c, n=n))
    group.add(compare("symbol of rhs", top_part(rhs, deg), classical, a=a, b=b, c=c, n=n))
    return group.result()


def coisson_skew_rhs(a: State, n: int, b: State) -> State:
    eps = _eps(a, b)
    total = State.zero()
    j = 0
    while n + j < pole_bound(b, a):
        term = translate_power(coisson_nprod(b, n + j, a), j)
        total = total + term.scale(Fraction((-1) ** j, factorial(j)))
        j += 1
    return total.scale(eps * (-1) ** (n + 1))


def check_coisson_skew(a: State, b: State) -> Check:
    group = CheckGroup("coisson skew")
    for n in range(max(pole_bound(a, b), pole_bound(b, a)) + 1):
        group.add(compare(f"skew n={n}", coisson_nprod(a, n, b), coisson_skew_rhs(a, n, b), a=a, b=b, n=n))
    return group.result()


def check_coisson_commutator(a: State, b: State, c: State, n: int, m: int) -> Check:
    if n < 0 or m < 0:
        raise ValueError("coisson commutator needs n, m >= 0")
    eps = _eps(a, b)
    lhs = coisson_nprod(a, n, coisson_nprod(b, m, c)) - coisson_nprod(b, m, coisson_nprod(a, n, c)).scale(eps)
    rhs = State.zero()
    for s in range(n + 1):
        ab = coisson_nprod(a, s, b)
        if ab:
            rhs = rhs + coisson_nprod(ab, n + m - s, c).scale(binom(n, s))
    return compare(f"coisson commutator n={n} m={m}", lhs, rhs, a=a, b=b, c=c, n=n, m=m)


# ---------------------------------------------------------------- jets of vector fields


def _jet_clean(e: dict) -> dict:
    return {k: v for k, v in e.items() if v}


def _jet_add(e: dict, k: int, v: VectorField) -> None:
    e[k] = e.get(k, VectorField()) + v


def jet_lie_bracket(a: dict, b: dict) -> dict:
    """Lie* bracket of d-polynomials in vector fields.

    An element is {k: xi_k} meaning sum_k d^k xi_k.  Returns {n: element}
    with n >= 0 for the n-th products.  On generators only n = 0 is
    nonzero and equals the bracket; d-linearity gives the rest, moving
    derivatives off the arguments one at a time.
    """
    out: dict = {}
    for k, xi in _jet_clean(a).items():
        for l, eta in _jet_clean(b).items():
            for n, elem in _generator_bracket(k, l, xi, eta).items():
                tgt = out.setdefault(n, {})
                for j, v in elem.items():
                    _jet_add(tgt, j, v)
    return {n: _jet_clean(e) for n, e in out.items() if _jet_clean(e)}


def _generator_bracket(k: int, l: int, xi: VectorField, eta: VectorField) -> dict:
    """(d^k xi)_(n) (d^l eta) for all n >= 0, as {n: {j: field}}.

    Uses (d a)_(n) b = -n a_(n-1) b and a_(n) (d b) = d(a_(n) b) + n a_(n-1) b.
    """
    bracket = vf_bracket(xi, eta)
    # start from xi_(n) eta = delta_{n0} [xi, eta]; record as {n: {j: coeff}}
    table = {0: {0: Fraction(1)}}
    for _ in range(k):
        new: dict = {}
        for n, e in table.items():
            # (d a)_(n+1) b = -(n+1) a_(n) b
            tgt = new.setdefault(n + 1, {})
            for j, c in e.items():
                tgt[j] = tgt.get(j, 0) - (n + 1) * c
        table = new
    for _ in range(l):
        new = {}
        for n, e in table.items():
            # a_(n)(d b) gets d(a_(n) b) at slot n and (n+1) a_(n) b at slot n+1
            tgt = new.setdefault(n, {})
            for j, c in e.items():
                tgt[j + 1] = tgt.get(j + 1, 0) + c
            tgt = new.setdefault(n + 1, {})
            for j, c in e.items():
                tgt[j] = tgt.get(j, 0) + (n + 1) * c
        table = new
    return {n: {j: bracket.scale(c) for j, c in e.items() if c} for n, e in table.items()}


def embed_jet(e: dict) -> State:
    """sum_k d^k xi_k as a degree-one symbol."""
    total = State.zero()
    for k, xi in e.items():
        total = total + translate_power(symbol_vector_field(xi), k)
    return total


def check_jet_bracket(a: dict, b: dict) -> Check:
    """jet_lie_bracket agrees with the coisson products of the embedded symbols."""
    ea, eb = embed_jet(a), embed_jet(b)
    ours = jet_lie_bracket(a, b)
    group = CheckGroup("jet lie bracket")
    top = max(pole_bound(ea, eb), max(ours, default=-1) + 1)
    for n in range(top + 1):
        group.add(compare(f"n={n}", embed_jet(ours.get(n, {})), coisson_nprod(ea, n, eb), a=ea, b=eb, n=n))
    return group.result()
