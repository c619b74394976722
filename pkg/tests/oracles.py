"""Independent reference values used by the tests.

Contractions are transcribed directly from the four commutator formulas of
the free-field system; series tables come from sympy's own series engine.
"""

from fractions import Fraction
from math import comb

import sympy

# (annihilating kind, created kind) -> overall sign in front of C(l+k,k)(-1)^k
_CONTRACTION_SIGNS = {
    ("p", "x"): 1,
    ("x", "p"): -1,
    ("pd", "dx"): 1,
    ("dx", "pd"): 1,
}


def contraction_oracle(a: str, k: int, b: str, l: int):
    """<a^(k)(z1), b^(l)(z2)> as (power, coefficient), or None."""
    sign = _CONTRACTION_SIGNS.get((a, b))
    if sign is None:
        return None
    return -(l + k + 1), sign * comb(l + k, k) * (-1) ** k


_v1, _v2, _t = sympy.symbols("v1 v2 t")


def _series_table(expr, order: int) -> dict:
    """Coefficients of expr(t) = sum c_j t^j for j <= order."""
    s = sympy.series(expr, _t, 0, order + 1).removeO()
    poly = sympy.Poly(sympy.expand(s), _t)
    return {j: poly.coeff_monomial(_t ** j) for j in range(order + 1)}


def expansion_oracle(domain: str, e: int, order: int) -> dict:
    """Keys are exponent pairs of the domain's two variables."""
    out = {}
    if e >= 0:
        order = max(order, e)
    if domain == "D13_GT_D23":
        # (v1 - v2)^e = v1^e (1 - t)^e, t = v2/v1
        coeffs = _series_table((1 - _t) ** e, order)
        for j, c in coeffs.items():
            if c:
                out[(e - j, j)] = Fraction(int(c.p), int(c.q))
    elif domain == "D23_GT_D13":
        # (v1 - v2)^e = (-v2)^e (1 - t)^e, t = v1/v2
        coeffs = _series_table(sympy.Integer(-1) ** e * (1 - _t) ** e, order)
        for j, c in coeffs.items():
            if c:
                out[(j, e - j)] = Fraction(int(c.p), int(c.q))
    elif domain == "D23_GT_D12":
        # (v1 + v2)^e = v2^e (1 + t)^e, t = v1/v2
        coeffs = _series_table((1 + _t) ** e, order)
        for j, c in coeffs.items():
            if c:
                out[(j, e - j)] = Fraction(int(c.p), int(c.q))
    else:
        raise ValueError(domain)
    if e >= 0:
        out = {k: v for k, v in out.items() if min(k) >= 0}
    return out


def reexpand_oracle(s: int, t: int, order: int) -> dict:
    """(z1-z2)^(-s-1)(z2-z3)^(-t-1) in (a, b) = (z1-z3, z2-z3), |a| > |b|.

    With b = t a: (a - b)^(-s-1) b^(-t-1) = a^(-s-1) (1-t)^(-s-1) b^(-t-1).
    The coefficient of t^m sits at a^(-s-1-m) b^(m-t-1).
    """
    coeffs = _series_table((1 - _t) ** (-s - 1), order)
    out = {}
    for m, c in coeffs.items():
        if c and s + m <= order:
            out[(-s - 1 - m, m - t - 1)] = Fraction(int(c.p), int(c.q))
    return out
