"""Sparse super-commutative polynomials in jet variables over the rationals.

A :class:`State` is a finite sum of normal-form monomials in the generators
``x(i,n)``, ``p(i,n)`` (momentum of ``x``), ``dx(i,n)``, ``pd(i,n)``
(momentum of ``dx``), and the base variables ``u(i)``, ``du(i)``.  The
``dx``, ``pd`` and ``du`` letters are odd.
"""

from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple, Optional


class Kind(IntEnum):
    U = 0
    DU = 1
    X = 2
    PX = 3
    DX = 4
    PDX = 5


ODD_KINDS = frozenset({Kind.DU, Kind.DX, Kind.PDX})
JET_KINDS = (Kind.X, Kind.PX, Kind.DX, Kind.PDX)
BASE_KINDS = (Kind.U, Kind.DU)
MOMENTUM_KINDS = frozenset({Kind.PX, Kind.PDX})

_NAMES = {Kind.U: "u", Kind.DU: "du", Kind.X: "x", Kind.PX: "p", Kind.DX: "dx", Kind.PDX: "pd"}
KIND_BY_NAME = {name: kind for kind, name in _NAMES.items()}


class Generator(NamedTuple):
    """One letter of the jet ring; tuple order is the global generator order."""

    kind: Kind
    index: int
    jet: int = 0

    @property
    def odd(self) -> bool:
        return self.kind in ODD_KINDS

    def shifted(self, k: int = 1) -> "Generator":
        return Generator(self.kind, self.index, self.jet + k)

    def __str__(self) -> str:
        name = _NAMES[self.kind]
        if self.kind in BASE_KINDS:
            return f"{name}({self.index})"
        return f"{name}({self.index},{self.jet})"


def gen(kind: Kind, index: int, jet: int = 0) -> Generator:
    if index < 1:
        raise ValueError(f"generator index must be positive, got {index}")
    if jet < 0:
        raise ValueError(f"jet order must be non-negative, got {jet}")
    if kind in BASE_KINDS and jet != 0:
        raise ValueError("base generators u, du carry no jet order")
    return Generator(Kind(kind), index, jet)


# A monomial is a tuple of (Generator, exponent) pairs, strictly increasing.
Monomial = tuple
ONE_MONO: Monomial = ()


def _odd_count(m: Monomial) -> int:
    return sum(1 for g, _ in m if g.kind in ODD_KINDS)


@lru_cache(maxsize=1 << 18)
def mono_parity(m: Monomial) -> int:
    return _odd_count(m) & 1


@lru_cache(maxsize=1 << 18)
def mono_mul(a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    """Product of normal-form monomials as ``(sign, monomial)``; sign 0 means zero."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    out = []
    i = j = 0
    swaps = 0
    # odd letters of a not yet emitted; each odd letter of b passes all of them
    odd_left_a = _odd_count(a)
    while i < len(a) and j < len(b):
        ga, ea = a[i]
        gb, eb = b[j]
        if ga < gb:
            out.append(a[i])
            if ga.kind in ODD_KINDS:
                odd_left_a -= 1
            i += 1
        elif gb < ga:
            out.append(b[j])
            if gb.kind in ODD_KINDS:
                swaps += odd_left_a
            j += 1
        else:
            if ga.kind in ODD_KINDS:
                return 0, ONE_MONO
            out.append((ga, ea + eb))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if swaps & 1 else 1), tuple(out)


def _render_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def render_monomial(m: Monomial) -> str:
    parts = []
    for g, e in m:
        parts.append(str(g) if e == 1 else f"{g}^{e}")
    return "*".join(parts)


def _num(c):
    """Exact coefficient; integral values are kept as int for speed."""
    if type(c) is int:
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class State:
    """Immutable super-polynomial: a mapping from monomials to nonzero rationals."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for m, c in (terms.items() if isinstance(terms, dict) else terms):
                if c:
                    clean[m] = clean.get(m, 0) + _num(c)
            clean = {m: c for m, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "State":
        s = object.__new__(cls)
        s._terms = terms
        s._hash = None
        return s

    # construction helpers
    @classmethod
    def zero(cls) -> "State":
        return cls._raw({})

    @classmethod
    def one(cls) -> "State":
        return cls._raw({ONE_MONO: 1})

    @classmethod
    def scalar(cls, c) -> "State":
        c = _num(c)
        return cls._raw({ONE_MONO: c} if c else {})

    @classmethod
    def monomial(cls, m: Monomial, c=1) -> "State":
        c = _num(c)
        return cls._raw({m: c} if c else {})

    @classmethod
    def generator(cls, g: Generator, power: int = 1) -> "State":
        if power == 0:
            return cls.one()
        if g.odd and power > 1:
            return cls.zero()
        return cls._raw({((g, power),): 1})

    # access
    @property
    def terms(self) -> dict:
        return self._terms

    def items(self):
        return self._terms.items()

    def sorted_items(self):
        return sorted(self._terms.items())

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, State):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == State.scalar(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # arithmetic
    def __add__(self, other) -> "State":
        if not isinstance(other, State):
            other = State.scalar(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return State._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "State":
        return State._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "State":
        if not isinstance(other, State):
            other = State.scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> "State":
        return State.scalar(other) - self

    def scale(self, c) -> "State":
        c = _num(c)
        if not c:
            return State.zero()
        if c == 1:
            return self
        return State._raw({m: v * c for m, v in self._terms.items()})

    def __mul__(self, other) -> "State":
        if isinstance(other, State):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "State":
        return self.scale(other)

    def __truediv__(self, c) -> "State":
        return self.scale(Fraction(1) / Fraction(c))

    def __pow__(self, k: int) -> "State":
        if k < 0:
            raise ValueError("negative powers are not polynomial")
        out = State.one()
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self) -> str:
        return f"State({render(self)!r})"

    def __str__(self) -> str:
        return render(self)

    # structure
    def generators(self) -> set:
        return {g for m in self._terms for g, _ in m}

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(m, Fraction(0))


def mul(a: State, b: State) -> State:
    """Super-commutative product with Koszul signs."""
    if not a._terms or not b._terms:
        return State.zero()
    out: dict = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            sign, m = mono_mul(ma, mb)
            if not sign:
                continue
            v = out.get(m, 0) + (ca * cb if sign > 0 else -ca * cb)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return State._raw(out)


def linear_combination(pairs: Iterable[tuple]) -> State:
    """Sum of ``coefficient * State`` pairs without intermediate objects."""
    out: dict = {}
    for c, s in pairs:
        if not c:
            continue
        for m, v in s._terms.items():
            w = out.get(m, 0) + c * v
            if w:
                out[m] = w
            else:
                out.pop(m, None)
    return State._raw(out)


def render(a: State) -> str:
    """Canonical text form: terms in monomial order, exact coefficients."""
    if not a._terms:
        return "0"
    pieces = []
    for m, c in sorted(a._terms.items()):
        neg = c < 0
        mag = -c if neg else c
        body = render_monomial(m)
        if not body:
            text = _render_coeff(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{_render_coeff(mag)}*{body}"
        if pieces:
            pieces.append(("-" if neg else "+") + text)
        else:
            pieces.append(("-" if neg else "") + text)
    return "".join(pieces)


# ---------------------------------------------------------------- parity


EVEN, ODD, MIXED, ZERO = "even", "odd", "mixed", "zero"


def parity(a: State) -> str:
    seen = {mono_parity(m) for m in a._terms}
    if not seen:
        return ZERO
    if len(seen) == 2:
        return MIXED
    return ODD if seen.pop() else EVEN


def parity_bit(a: State) -> int:
    """0/1 parity of a homogeneous nonzero state (0 for zero); raises on mixed."""
    p = parity(a)
    if p == MIXED:
        raise ValueError("state is not parity-homogeneous")
    return 1 if p == ODD else 0


# ---------------------------------------------------------------- derivations


@lru_cache(maxsize=1 << 18)
def _mono_partial(g: Generator, m: Monomial) -> Optional[tuple]:
    odd_before = 0
    for pos, (h, e) in enumerate(m):
        if h == g:
            rest = m[:pos] + ((h, e - 1),) + m[pos + 1:] if e > 1 else m[:pos] + m[pos + 1:]
            c = e
            if g.kind in ODD_KINDS and odd_before & 1:
                c = -c
            return c, rest
        if h > g:
            return None
        if h.kind in ODD_KINDS:
            odd_before += 1
    return None


def partial(g: Generator, a: State) -> State:
    """Left super-derivative with respect to the letter ``g``."""
    out: dict = {}
    for m, c in a._terms.items():
        r = _mono_partial(g, m)
        if r is None:
            continue
        k, rest = r
        v = out.get(rest, 0) + k * c
        if v:
            out[rest] = v
        else:
            out.pop(rest, None)
    return State._raw(out)


@lru_cache(maxsize=1 << 18)
def _mono_right_partial(g: Generator, m: Monomial) -> Optional[tuple]:
    r = _mono_partial(g, m)
    if r is None:
        return None
    k, rest = r
    # moving g from the left end to the right end passes every odd letter of rest
    if g.kind in ODD_KINDS and _odd_count(rest) & 1:
        k = -k
    return k, rest


def right_partial(g: Generator, a: State) -> State:
    """Right super-derivative with respect to the letter ``g``."""
    out: dict = {}
    for m, c in a._terms.items():
        r = _mono_right_partial(g, m)
        if r is None:
            continue
        k, rest = r
        v = out.get(rest, 0) + k * c
        if v:
            out[rest] = v
        else:
            out.pop(rest, None)
    return State._raw(out)


def mul_generator(g: Generator, a: State, power: int = 1) -> State:
    """Left multiplication by ``g**power``."""
    return mul(State.generator(g, power), a)


def du_times(i: int, a: State) -> State:
    """Left multiplication by du(i); only earlier du letters can precede it."""
    g = Generator(Kind.DU, i, 0)
    out: dict = {}
    for m, c in a._terms.items():
        odd = 0
        for pos, (h, _) in enumerate(m):
            if h >= g:
                break
            if h.kind == Kind.DU:
                odd += 1
        else:
            pos = len(m)
        if pos < len(m) and m[pos][0] == g:
            continue
        out[m[:pos] + ((g, 1),) + m[pos:]] = -c if odd & 1 else c
    return State._raw(out)


def derivation(a: State, image: Callable[[Generator], State], odd: bool = False) -> State:
    """Extend ``image`` on letters to a (super-)derivation applied to ``a``.

    ``odd`` selects the Koszul rule D(fg) = D(f)g + (-1)^{|f|} f D(g).
    """
    out: dict = {}
    for m, c in a._terms.items():
        for pos, (g, e) in enumerate(m):
            dg = image(g)
            if not dg._terms:
                continue
            prefix = m[:pos]
            suffix = m[pos + 1:]
            if e > 1:
                # g is even here; g^{e-1} commutes with everything
                prefix = prefix + ((g, e - 1),)
            piece = State.monomial(prefix, c * e) * dg * State.monomial(suffix)
            if odd and _odd_count(m[:pos]) & 1:
                piece = -piece
            for mm, v in piece._terms.items():
                w = out.get(mm, 0) + v
                if w:
                    out[mm] = w
                else:
                    out.pop(mm, None)
    return State._raw(out)


@lru_cache(maxsize=1 << 18)
def _mono_translate(m: Monomial) -> State:
    def image(g: Generator) -> State:
        if g.kind in BASE_KINDS:
            return State.zero()
        return State.generator(g.shifted()).scale(g.jet + 1)

    return derivation(State.monomial(m), image)


def translate(a: State) -> State:
    """The translation derivation: g^(n) -> (n+1) g^(n+1); base letters are constant."""
    return linear_combination((c, _mono_translate(m)) for m, c in a._terms.items())


def translate_power(a: State, j: int) -> State:
    for _ in range(j):
        a = translate(a)
    return a


def base_derivative(i: int, a: State, m_dim: Optional[int] = None) -> State:
    """Partial derivative in the base coordinate ``u(i)``."""
    if i < 1 or (m_dim is not None and i > m_dim):
        raise ValueError(f"base index {i} out of range")
    return partial(Generator(Kind.U, i, 0), a)


# ---------------------------------------------------------------- splitting


@lru_cache(maxsize=1 << 18)
def split_base(m: Monomial) -> tuple[Monomial, Monomial]:
    """Split a normal-form monomial into (base part, jet part); base letters come first."""
    k = 0
    while k < len(m) and m[k][0].kind in BASE_KINDS:
        k += 1
    return m[:k], m[k:]


def momentum_count(m: Monomial) -> int:
    return sum(e for g, e in m if g.kind in MOMENTUM_KINDS)


def base_degree(m: Monomial) -> int:
    """Exterior degree in the du letters."""
    return sum(1 for g, _ in m if g.kind == Kind.DU)


def homogeneous_part(a: State, key: Callable[[Monomial], int], value: int) -> State:
    return State._raw({m: c for m, c in a._terms.items() if key(m) == value})


# convenient constructors


def X(i: int, n: int = 0) -> State:
    return State.generator(gen(Kind.X, i, n))


def P(i: int, n: int = 0) -> State:
    return State.generator(gen(Kind.PX, i, n))


def DX(i: int, n: int = 0) -> State:
    return State.generator(gen(Kind.DX, i, n))


def PD(i: int, n: int = 0) -> State:
    return State.generator(gen(Kind.PDX, i, n))


def U(i: int) -> State:
    return State.generator(gen(Kind.U, i))


def DU(i: int) -> State:
    return State.generator(gen(Kind.DU, i))


ONE = State.one()
ZERO_STATE = State.zero()
