"""The free-field vertex superalgebra on N bosonic and N fermionic pairs.

States are super-polynomials in jet letters (see :mod:`chical.superjet`);
a letter ``g^(k)`` is the creation mode ``g_(-k-1)`` applied to the vacuum.
Two independent routes compute n-th products:

* :func:`nprod` builds the vertex operator of a monomial by the field
  recursion ``Y(g_(-k-1) P, z) = :(1/k!) d^k Y(g, z) Y(P, z):``;
* :func:`wick_nprod` sums over partial matchings of contractions and
  translates the left factor (Wick's theorem).

Base letters ``u``, ``du`` are scalars: products are linear over them with
the Koszul sign for ``du`` passing odd letters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional

from .report import Check, CheckGroup, compare
from .series import (
    DEFAULT_HORIZON,
    ExpansionDomain,
    OpeSeries,
    binom,
    expand_inverse_difference,
    series_from_products,
)
from .superjet import (
    BASE_KINDS,
    JET_KINDS,
    ODD_KINDS,
    Generator,
    Kind,
    Monomial,
    State,
    _mono_partial,
    _mono_right_partial,
    mono_mul,
    mono_parity,
    parity_bit,
    partial,
    split_base,
    translate,
)

# Letter paired with each kind by a contraction, and the sign of the
# annihilation mode g_(l) = sign * d/d(partner^(l)).
PARTNER = {Kind.X: Kind.PX, Kind.PX: Kind.X, Kind.DX: Kind.PDX, Kind.PDX: Kind.DX}
ANNIHILATION_SIGN = {Kind.X: -1, Kind.PX: 1, Kind.DX: 1, Kind.PDX: 1}


@dataclass(frozen=True)
class ModeIndex:
    """The mode ``g_(n)`` of a jet-0 generator ``g``."""

    generator: Generator
    n: int

    def __post_init__(self):
        if self.generator.kind not in JET_KINDS or self.generator.jet != 0:
            raise ValueError("modes are attached to jet-0 letters x, p, dx, pd")


@dataclass(frozen=True)
class ContractionValue:
    power: int
    coefficient: int


def vacuum() -> State:
    return State.one()


def contraction(u: Generator, v: Generator) -> Optional[ContractionValue]:
    """<u(z1), v(z2)> for letters u = a^(k), v = b^(l); None when they do not pair."""
    if u.kind not in PARTNER or PARTNER[u.kind] != v.kind or u.index != v.index:
        return None
    k, l = u.jet, v.jet
    c = binom(l + k, k) * (-1) ** k * ANNIHILATION_SIGN[u.kind]
    return ContractionValue(-(l + k + 1), c)


# ---------------------------------------------------------------- modes


def _annihilate_mono(g0: Generator, l: int, m: Monomial) -> Optional[tuple]:
    target = Generator(PARTNER[g0.kind], g0.index, l)
    r = _mono_partial(target, m)
    if r is None:
        return None
    c, rest = r
    return c * ANNIHILATION_SIGN[g0.kind], rest


def apply_mode(g: Generator, n: int, b: State) -> State:
    """Action of the mode g_(n) of a jet-0 letter on a state."""
    if g.kind not in JET_KINDS:
        raise ValueError("base letters have no modes")
    g0 = Generator(g.kind, g.index, 0)
    if n < 0:
        return State.generator(g0.shifted(-n - 1)) * b
    target = Generator(PARTNER[g.kind], g.index, n)
    return partial(target, b).scale(ANNIHILATION_SIGN[g.kind])


# ---------------------------------------------------------------- pole bounds


def _max_jets(m: Monomial) -> dict:
    out: dict = {}
    for g, _ in m:
        if g.kind in BASE_KINDS:
            continue
        key = (g.kind, g.index)
        if out.get(key, -1) < g.jet:
            out[key] = g.jet
    return out


@lru_cache(maxsize=1 << 20)
def mono_pole_bound(a: Monomial, b: Monomial) -> int:
    """An n with a_(m) b = 0 for all m >= n (monomials)."""
    ja = {(g.kind, g.index) for g, _ in a if g.kind not in BASE_KINDS}
    jb = {(g.kind, g.index) for g, _ in b if g.kind not in BASE_KINDS}
    bound = 0
    for g, e in a:
        if g.kind in PARTNER and (PARTNER[g.kind], g.index) in jb:
            bound += e * (g.jet + 1)
    for g, e in b:
        if g.kind in PARTNER and (PARTNER[g.kind], g.index) in ja:
            bound += e * g.jet
    return bound


def pole_bound(a: State, b: State) -> int:
    """An n with a_(m) b = 0 for every m >= n."""
    best = 0
    for ma in a.terms:
        for mb in b.terms:
            best = max(best, mono_pole_bound(ma, mb))
    return best


# ---------------------------------------------------------------- field recursion


def _add_into(out: dict, s: State, c) -> None:
    for m, v in s.terms.items():
        w = out.get(m, 0) + c * v
        if w:
            out[m] = w
        else:
            out.pop(m, None)


@lru_cache(maxsize=1 << 20)
def _nprod_mono(a: Monomial, n: int, c: Monomial) -> State:
    """a_(n) c for a jet-only monomial a and any monomial c."""
    if not a:
        return State.monomial(c) if n == -1 else State.zero()
    if n >= mono_pole_bound(a, c):
        return State.zero()
    g, e = a[0]
    rest = (((g, e - 1),) + a[1:]) if e > 1 else a[1:]
    k = g.jet
    g0 = Generator(g.kind, g.index, 0)
    eps = -1 if (g.kind in ODD_KINDS and mono_parity(rest)) else 1
    out: dict = {}

    # creation half: sum_i C(i+k, k) g^(i+k) . P_(n+i) c
    i = 0
    while n + i < mono_pole_bound(rest, c):
        inner = _nprod_mono(rest, n + i, c)
        if inner:
            coeff = binom(i + k, k)
            letter = ((g0.shifted(i + k), 1),)
            for mm, v in inner.terms.items():
                sign, prod = mono_mul(letter, mm)
                if sign:
                    w = out.get(prod, 0) + sign * coeff * v
                    if w:
                        out[prod] = w
                    else:
                        out.pop(prod, None)
        i += 1

    # annihilation half: eps * sum_{j>=k} (-1)^k C(j, k) P_(n-j-1) g_(j-k) c
    partner_jet = -1
    for h, _ in c:
        if h.kind == PARTNER.get(g.kind) and h.index == g.index:
            partner_jet = max(partner_jet, h.jet)
    for l in range(partner_jet + 1):
        r = _annihilate_mono(g0, l, c)
        if r is None:
            continue
        cc, cm = r
        j = l + k
        coeff = eps * (-1) ** k * binom(j, k) * cc
        _add_into(out, _nprod_mono(rest, n - j - 1, cm), coeff)
    return State._raw(out)


@lru_cache(maxsize=1 << 12)
def _by_jet_part(a: State) -> tuple:
    """Terms of a grouped by jet part: ((jet, odd, ((base, coeff), ...)), ...)."""
    groups: dict = {}
    for m, c in a.terms.items():
        base, jet = split_base(m)
        groups.setdefault(jet, []).append((base, c))
    return tuple((jet, mono_parity(jet), tuple(v)) for jet, v in groups.items())


def nprod(a: State, n: int, b: State) -> State:
    """The n-th product a_(n) b via the field recursion."""
    out: dict = {}
    get = out.get
    for mb, cb in b.terms.items():
        # base letters are scalars: pull them out with a Koszul sign
        bbase, bjet = split_base(mb)
        odd_bbase = mono_parity(bbase)
        for jet, odd_jet, bases in _by_jet_part(a):
            r = _nprod_mono(jet, n, bjet)
            if not r:
                continue
            flip = -1 if odd_jet and odd_bbase else 1
            for base, ca in bases:
                s1, front = mono_mul(base, bbase)
                if not s1:
                    continue
                c = s1 * flip * ca * cb
                # r is jet-only and base letters sort first: plain concatenation
                for m, v in r.terms.items():
                    prod = front + m
                    w = get(prod, 0) + c * v
                    if w:
                        out[prod] = w
                    else:
                        del out[prod]
    return State._raw(out)


def mode(a: State, n: int):
    """The operator a_(n) as a function on states."""
    return lambda b: nprod(a, n, b)


# ---------------------------------------------------------------- Wick route


@lru_cache(maxsize=1 << 16)
def _translate_scaled(m: Monomial, j: int) -> State:
    """d^j m / j!"""
    s = State.monomial(m)
    for _ in range(j):
        s = translate(s)
    return s.scale(Fraction(1, factorial(j)))


@lru_cache(maxsize=1 << 16)
def _wick_pairs(a: Monomial, b: Monomial) -> dict:
    """All contraction patterns: {(a_rest, b_rest, power): coeff}."""
    level = {(a, b, 0): Fraction(1)}
    total = dict(level)
    k = 0
    while level:
        k += 1
        nxt: dict = {}
        for (ma, mb, p), c in level.items():
            for u, _ in ma:
                if u.kind not in PARTNER:
                    continue
                for v, _ in mb:
                    cv = contraction(u, v)
                    if cv is None:
                        continue
                    ra = _mono_right_partial(u, ma)
                    lb = _mono_partial(v, mb)
                    key = (ra[1], lb[1], p + cv.power)
                    val = nxt.get(key, 0) + c * cv.coefficient * ra[0] * lb[0]
                    if val:
                        nxt[key] = val
                    else:
                        nxt.pop(key, None)
        level = {key: Fraction(v) / k for key, v in nxt.items()}
        for key, v in level.items():
            w = total.get(key, 0) + v
            if w:
                total[key] = w
            else:
                total.pop(key, None)
    return total


@lru_cache(maxsize=1 << 18)
def _wick_mono(a: Monomial, n: int, b: Monomial, contractions: Optional[int] = None) -> State:
    out: dict = {}
    target = -n - 1
    size = _letter_count(a)
    for (ma, mb, p), c in _wick_pairs(a, b).items():
        j = target - p
        if j < 0:
            continue
        if contractions is not None and size - _letter_count(ma) != contractions:
            continue
        left = _translate_scaled(ma, j)
        _add_into(out, left * State.monomial(mb), c)
    return State._raw(out)


def wick_nprod(a: State, n: int, b: State, contractions: Optional[int] = None) -> State:
    """The n-th product a_(n) b from the closed-form Wick sum.

    ``contractions`` restricts the sum to patterns with exactly that many
    contractions (1 gives the coisson limit).
    """
    out: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            r = _wick_mono(ma, n, mb, contractions)
            if r:
                _add_into(out, r, ca * cb)
    return State._raw(out)


def wick_terms(a: State, b: State, contractions: Optional[int] = None) -> dict:
    """Coefficients {power: State} of a(z1) o b(z2) before translation.

    With ``contractions`` set, keep only patterns with exactly that many
    contractions.  Used for the quasiclassical (single contraction) limit.
    """
    out: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            for (ra, rb, p), c in _wick_pairs(ma, mb).items():
                if contractions is not None:
                    used = _letter_count(ma) - _letter_count(ra)
                    if used != contractions:
                        continue
                s = State.monomial(ra) * State.monomial(rb)
                acc = out.setdefault(p, {})
                _add_into(acc, s, c * ca * cb)
    return {p: State._raw(v) for p, v in out.items() if v}


def _letter_count(m: Monomial) -> int:
    return sum(e for _, e in m)


# ---------------------------------------------------------------- OPE


def ope(a: State, b: State, horizon: int = DEFAULT_HORIZON) -> OpeSeries:
    """Complete singular part of a(z1) o b(z2) plus regular terms up to (z1-z2)^horizon."""
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    top = pole_bound(a, b)
    products = {n: nprod(a, n, b) for n in range(-horizon - 1, top)}
    return series_from_products(products, horizon)


# ---------------------------------------------------------------- identities


def _sign(a: State, b: State) -> int:
    return -1 if parity_bit(a) and parity_bit(b) else 1


def _homogeneous(*states: State) -> None:
    for s in states:
        parity_bit(s)


def skew_rhs(a: State, n: int, b: State, product=nprod) -> State:
    """(-1)^{|a||b|} (-1)^{n+1} sum_j (-1)^j/j! d^j (b_(n+j) a)."""
    eps = _sign(a, b)
    total = State.zero()
    bound = pole_bound(b, a)
    j = 0
    while n + j < bound:
        term = product(b, n + j, a)
        for _ in range(j):
            term = translate(term)
        total = total + term.scale(Fraction((-1) ** j, factorial(j)))
        j += 1
    return total.scale(eps * (-1) ** (n + 1))


def check_skew(a: State, b: State, horizon: int = DEFAULT_HORIZON, product=nprod) -> Check:
    _homogeneous(a, b)
    top = max(pole_bound(a, b), pole_bound(b, a))
    for n in range(-horizon - 1, top + 1):
        c = compare(f"skew n={n}", product(a, n, b), skew_rhs(a, n, b, product), a=a, b=b, n=n)
        if not c.passed:
            return Check("skew", False, c.witness)
    return Check("skew", True)


def commutator_sides(a: State, b: State, c: State, n: int, m: int, product=nprod):
    """Both sides of [a_(n), b_(m)] c = sum_s C(n,s) (a_(s) b)_(n+m-s) c."""
    eps = _sign(a, b)
    lhs = product(a, n, product(b, m, c)) - product(b, m, product(a, n, c)).scale(eps)
    rhs = State.zero()
    for s in range(pole_bound(a, b)):
        coeff = binom(n, s)
        if coeff:
            ab = product(a, s, b)
            if ab:
                rhs = rhs + product(ab, n + m - s, c).scale(coeff)
    return lhs, rhs


def check_commutator(a: State, b: State, c: State, n: int, m: int, product=nprod) -> Check:
    lhs, rhs = commutator_sides(a, b, c, n, m, product)
    return compare(f"commutator n={n} m={m}", lhs, rhs, a=a, b=b, c=c, n=n, m=m)


def borcherds_residues(a: State, b: State, c: State, n: int, m: int, l: int, product=nprod):
    """The three residues T1, T2, T3 of the Jacobi identity with test function
    (z1-z3)^n (z2-z3)^m (z1-z2)^(-l)."""
    # T1: variables x = z1-z3, y = z2-z3, |x| > |y|
    order1 = max(0, pole_bound(b, c) - m)
    t1 = State.zero()
    for (p, q), coeff in sorted(expand_inverse_difference(ExpansionDomain.D13_GT_D23, -l, order1).items()):
        if m + q >= pole_bound(b, c):
            continue
        t1 = t1 + product(a, n + p, product(b, m + q, c)).scale(coeff)
    # T2: same variables, |y| > |x|
    order2 = max(0, pole_bound(a, c) - n)
    t2 = State.zero()
    for (p, q), coeff in sorted(expand_inverse_difference(ExpansionDomain.D23_GT_D13, -l, order2).items()):
        if n + p >= pole_bound(a, c):
            continue
        t2 = t2 + product(b, m + q, product(a, n + p, c)).scale(coeff)
    # T3: variables w = z1-z2, y = z2-z3, |y| > |w|; expand (z1-z3)^n
    ab_bound = pole_bound(a, b)
    order3 = max(0, ab_bound + l)
    t3 = State.zero()
    for (p, q), coeff in sorted(expand_inverse_difference(ExpansionDomain.D23_GT_D12, n, order3).items()):
        s = p - l
        if s >= ab_bound:
            continue
        ab = product(a, s, b)
        if ab:
            t3 = t3 + product(ab, q + m, c).scale(coeff)
    return t1, t2, t3


def check_borcherds(a: State, b: State, c: State, n: int, m: int, l: int, product=nprod) -> Check:
    eps = _sign(a, b)
    t1, t2, t3 = borcherds_residues(a, b, c, n, m, l, product)
    return compare(
        f"borcherds n={n} m={m} l={l}", t1 - t2.scale(eps), t3, a=a, b=b, c=c, n=n, m=m, l=l
    )


def normal_ordering_sides(a: State, b: State, c: State, n: int, product=nprod):
    eps = _sign(a, b)
    lhs = product(product(a, -1, b), n, c)
    rhs = State.zero()
    j = 0
    bc = pole_bound(b, c)
    while n + j < bc:
        rhs = rhs + product(a, -1 - j, product(b, n + j, c))
        j += 1
    for j in range(pole_bound(a, c)):
        ac = product(a, j, c)
        if ac:
            rhs = rhs + product(b, n - j - 1, ac).scale(eps)
    return lhs, rhs


def check_normal_ordering(a: State, b: State, c: State, n: int, product=nprod) -> Check:
    lhs, rhs = normal_ordering_sides(a, b, c, n, product)
    return compare(f"normal-ordering n={n}", lhs, rhs, a=a, b=b, c=c, n=n)


def check_translation(a: State, n: int, b: State) -> Check:
    group = CheckGroup("translation")
    group.add(compare("(da)_(n) = -n a_(n-1)", nprod(translate(a), n, b), nprod(a, n - 1, b).scale(-n)))
    group.add(
        compare(
            "d(a_(n) b) = (da)_(n) b + a_(n) db",
            translate(nprod(a, n, b)),
            nprod(translate(a), n, b) + nprod(a, n, translate(b)),
        )
    )
    return group.result()


def check_vacuum(a: State) -> Check:
    group = CheckGroup("vacuum")
    one = vacuum()
    for n in range(0, 3):
        group.add(compare(f"a_({n}) 1 = 0", nprod(a, n, one), State.zero()))
    group.add(compare("a_(-1) 1 = a", nprod(a, -1, one), a))
    group.add(compare("a_(-2) 1 = da", nprod(a, -2, one), translate(a)))
    group.add(compare("1_(-1) a = a", nprod(one, -1, a), a))
    return group.result()


# ---------------------------------------------------------------- mode algebra


def gamma_bracket(g: ModeIndex, h: ModeIndex) -> Fraction:
    """Central value of the super-bracket [g_(n), h_(m)]."""
    a, b = g.generator, h.generator
    if a.index != b.index or PARTNER[a.kind] != b.kind or g.n + h.n + 1 != 0:
        return Fraction(0)
    # [p_(n), x_(m)] = 1 and [x_(n), p_(m)] = -1; odd pairs anticommute to 1
    return Fraction(-1 if a.kind == Kind.X else 1)


def mode_bracket_on(g: ModeIndex, h: ModeIndex, s: State) -> State:
    """[g_(n), h_(m)] applied to s, computed from apply_mode."""
    eps = -1 if (g.generator.odd and h.generator.odd) else 1
    gh = apply_mode(g.generator, g.n, apply_mode(h.generator, h.n, s))
    hg = apply_mode(h.generator, h.n, apply_mode(g.generator, g.n, s))
    return gh - hg.scale(eps)


def lie_bracket(p: tuple, q: tuple) -> list:
    """[a_(n), b_(m)] = sum_j C(n, j) (a_(j) b)_(n+m-j) as a list of (mode, state)."""
    n, a = p
    m, b = q
    out = []
    for j in range(pole_bound(a, b)):
        coeff = binom(n, j)
        if not coeff:
            continue
        ab = nprod(a, j, b)
        if ab:
            out.append((n + m - j, ab.scale(coeff)))
    return out


def apply_formal_modes(terms: list, s: State) -> State:
    total = State.zero()
    for k, a in terms:
        total = total + nprod(a, k, s)
    return total


def check_lie_bracket(p: tuple, q: tuple, samples) -> Check:
    """Operator check of lie_bracket against the commutator of modes."""
    (n, a), (m, b) = p, q
    eps = _sign(a, b)
    terms = lie_bracket(p, q)
    group = CheckGroup("lie-bracket")
    for s in samples:
        lhs = nprod(a, n, nprod(b, m, s)) - nprod(b, m, nprod(a, n, s)).scale(eps)
        group.add(compare("[a_(n), b_(m)] s", lhs, apply_formal_modes(terms, s), a=a, b=b, s=s, n=n, m=m))
    return group.result()


def check_zero_mode_derivation(a: State, b: State, c: State, n: int) -> Check:
    """a_(0) is a derivation of every n-th product."""
    eps = _sign(a, b)
    lhs = nprod(a, 0, nprod(b, n, c))
    rhs = nprod(nprod(a, 0, b), n, c) + nprod(b, n, nprod(a, 0, c)).scale(eps)
    return compare(f"zero-mode derivation n={n}", lhs, rhs, a=a, b=b, c=c, n=n)


def clear_caches() -> None:
    for f in (_nprod_mono, _wick_mono, _wick_pairs, _translate_scaled, mono_pole_bound, _by_jet_part):
        f.cache_clear()
