"""OPE carriers and re-expansions of powers of coordinate differences.

Three points z1, z2, z3 enter the associativity identities.  Expansions
are returned as sparse tables ``{(p, q): coefficient}`` standing for
``v1**p * v2**q`` in the two variables named by the domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb

from .superjet import State, render

DEFAULT_HORIZON = 4


def binom(n: int, k: int) -> int:
    """Generalized binomial coefficient, valid for negative ``n``."""
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k)
    return (-1) ** k * comb(k - n - 1, k)


class HorizonError(ValueError):
    pass


@dataclass(frozen=True)
class OpeSeries:
    """Coefficients of (z1 - z2)**k; the singular part is complete."""

    min_power: int
    coeffs: dict = field(default_factory=dict)
    max_computed: int = DEFAULT_HORIZON

    def __post_init__(self):
        for k, v in self.coeffs.items():
            if not v:
                raise ValueError(f"zero coefficient stored at power {k}")
            if k < self.min_power or k > self.max_computed:
                raise ValueError(f"power {k} outside [{self.min_power}, {self.max_computed}]")

    def coefficient(self, k: int) -> State:
        if k > self.max_computed:
            raise HorizonError(
                f"regular part not computed to that order: requested {k}, horizon {self.max_computed}"
            )
        return self.coeffs.get(k, State.zero())

    def pole_order(self) -> int:
        """Largest m with a nonzero coefficient at (z1-z2)**-m, or 0."""
        neg = [k for k in self.coeffs if k < 0]
        return -min(neg) if neg else 0

    def singular_part(self) -> dict:
        return {k: v for k, v in self.coeffs.items() if k < 0}

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        lines = []
        for k in sorted(self.coeffs):
            lines.append(f"(z1-z2)^{k}: {render(self.coeffs[k])}")
        return "\n".join(lines)


def series_from_products(products: dict, horizon: int) -> OpeSeries:
    """Build an OpeSeries from ``{n: a_(n) b}`` (power k = -n-1)."""
    coeffs = {-n - 1: v for n, v in products.items() if v and -n - 1 <= horizon}
    lo = min(coeffs) if coeffs else horizon + 1
    return OpeSeries(min(lo, horizon + 1), coeffs, horizon)


class ExpansionDomain(Enum):
    """Which geometric expansion applies.

    D13_GT_D23: |z1-z3| > |z2-z3|, variables (z1-z3, z2-z3), expands (z1-z2).
    D23_GT_D13: |z2-z3| > |z1-z3|, variables (z1-z3, z2-z3), expands (z1-z2).
    D23_GT_D12: |z2-z3| > |z1-z2|, variables (z1-z2, z2-z3), expands (z1-z3).
    """

    D13_GT_D23 = "D13_GT_D23"
    D23_GT_D13 = "D23_GT_D13"
    D23_GT_D12 = "D23_GT_D12"


def expand_inverse_difference(domain: ExpansionDomain, exponent: int, order: int) -> dict:
    """Expansion of the domain's difference raised to ``exponent``.

    Terms are indexed by the expansion step ``j <= order``; for a
    non-negative exponent the table is the finite binomial expansion.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    e = exponent
    top = order if e < 0 else e
    table: dict = {}
    for j in range(top + 1):
        b = binom(e, j)
        if not b:
            continue
        if domain is ExpansionDomain.D13_GT_D23:
            # (v1 - v2)^e with |v1| > |v2|
            key, c = (e - j, j), -b if j % 2 else b
        elif domain is ExpansionDomain.D23_GT_D13:
            # (v1 - v2)^e = (-1)^e (v2 - v1)^e with |v2| > |v1|
            key, c = (j, e - j), -b if (e + j) % 2 else b
        elif domain is ExpansionDomain.D23_GT_D12:
            # (v1 + v2)^e with |v2| > |v1|
            key, c = (j, e - j), b
        else:  # pragma: no cover
            raise ValueError(domain)
        table[key] = Fraction(c)
    return table


def reexpand_double_pole(s: int, t: int, order: int) -> dict:
    """(z1-z2)^(-s-1) (z2-z3)^(-t-1) in the variables (z1-z3, z2-z3), |z1-z3| > |z2-z3|.

    Returns ``{(-j-1, -t+j-s-1): C(j, s)}`` for ``0 <= j <= order``.
    """
    if s < 0 or t < 0:
        raise ValueError("s and t must be non-negative")
    return {
        (-j - 1, -t + j - s - 1): Fraction(binom(j, s))
        for j in range(order + 1)
        if binom(j, s)
    }


def table_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (p1, q1), c1 in a.items():
        for (p2, q2), c2 in b.items():
            k = (p1 + p2, q1 + q2)
            v = out.get(k, 0) + c1 * c2
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out
