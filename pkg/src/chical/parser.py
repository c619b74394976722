"""Text formats: states, vector fields and connection files.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (["*"] unary)*          juxtaposition multiplies
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT ["/" INT] | letter | "d(" INT ")" | "(" expr ")"
    letter := ("x" | "p" | "dx" | "pd") "(" INT ["," INT] ")" | ("u" | "du") "(" INT ")"

``d(i)`` stands for the coordinate vector field and is only accepted when
parsing vector fields; each term may contain it at most once.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from .cartan import VectorField
from .superjet import BASE_KINDS, KIND_BY_NAME, Generator, State, render


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.pos = pos
        self.text = text
        where = f" at position {pos}" if text else ""
        super().__init__(f"{message}{where}" + (f"\n  {text}\n  {' ' * pos}^" if text else ""))


def _tokenize(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = re.match(r"\d+", text[pos:])
        if m:
            out.append(("int", m.group(), pos))
            pos += m.end()
            continue
        m = re.match(r"[a-z]+", text[pos:])
        if m:
            word = m.group()
            if word not in KIND_BY_NAME and word != "d":
                raise ParseError(f"unknown name {word!r}", text, pos)
            out.append(("name", word, pos))
            pos += m.end()
            continue
        ch = text[pos]
        if ch not in "+-*/^(),":
            raise ParseError(f"unexpected character {ch!r}", text, pos)
        out.append(("op", ch, pos))
        pos += 1
    out.append(("end", "", len(text)))
    return out


# Values while parsing: {None: scalar part, i: coefficient of d(i)}


def _v_add(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, s in b.items():
        out[k] = out.get(k, State.zero()) + (s if sign > 0 else -s)
    return {k: s for k, s in out.items() if s}


def _has_field(v: dict) -> bool:
    return any(k is not None for k in v)


class _Parser:
    def __init__(self, text: str, n_dim: Optional[int], m_dim: Optional[int], fields: bool):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.n_dim = n_dim
        self.m_dim = m_dim
        self.fields = fields

    # token helpers
    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, self.text, tok[2])

    def expect(self, value: str):
        tok = self.take()
        if tok[1] != value or tok[0] == "int":
            self.error(f"expected {value!r}", tok)
        return tok

    def integer(self) -> int:
        tok = self.take()
        if tok[0] != "int":
            self.error("expected an integer", tok)
        return int(tok[1])

    # grammar
    def parse(self) -> dict:
        v = self.expr()
        if self.peek()[0] != "end":
            self.error("unexpected input")
        return v

    def expr(self) -> dict:
        v = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            v = _v_add(v, self.term(), 1 if op == "+" else -1)
        return v

    def _starts_factor(self) -> bool:
        kind, val, _ = self.peek()
        return kind in ("int", "name") or (kind == "op" and val == "(")

    def term(self) -> dict:
        v = self.unary()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
            elif not self._starts_factor():
                return v
            rhs = self.unary()
            v = self._mul(v, rhs, tok)

    def _mul(self, a: dict, b: dict, tok) -> dict:
        if _has_field(a) and _has_field(b):
            self.error("product of two vector fields", tok)
        out: dict = {}
        for ka, sa in a.items():
            for kb, sb in b.items():
                key = ka if ka is not None else kb
                out = _v_add(out, {key: sa * sb})
        return out

    def unary(self) -> dict:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            v = self.unary()
            return v if tok[1] == "+" else {k: -s for k, s in v.items()}
        return self.power()

    def power(self) -> dict:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            e = self.integer()
            if _has_field(base):
                if e != 1:
                    self.error("vector fields cannot be raised to a power", tok)
                return base
            value = base.get(None, State.zero()) ** e
            return {None: value} if value else {}
        return base

    def atom(self) -> dict:
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            num = Fraction(int(val))
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                self.take()
                den = self.integer()
                if den == 0:
                    self.error("division by zero", nxt)
                num = num / den
            s = State.scalar(num)
            return {None: s} if s else {}
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect(")")
            return v
        if kind == "name":
            return self.letter(tok)
        self.error("expected a number, a generator or '('", tok)

    def letter(self, tok) -> dict:
        name = tok[1]
        self.expect("(")
        index = self.integer()
        jet = 0
        if name == "d":
            self.expect(")")
            if not self.fields:
                self.error("d(i) is only allowed in vector fields", tok)
            self._check_index(index, self.n_dim, "N", tok)
            return {index: State.one()}
        kind = KIND_BY_NAME[name]
        if kind not in BASE_KINDS and self.peek()[1] == ",":
            self.take()
            jet = self.integer()
        self.expect(")")
        if kind in BASE_KINDS:
            self._check_index(index, self.m_dim, "M", tok)
        else:
            self._check_index(index, self.n_dim, "N", tok)
        return {None: State.generator(Generator(kind, index, jet))}

    def _check_index(self, index: int, bound: Optional[int], label: str, tok) -> None:
        if index < 1:
            self.error(f"index {index} must be at least 1", tok)
        if bound is not None and index > bound:
            self.error(f"index {index} out of range ({label}={bound})", tok)


def parse_state(text: str, n_dim: Optional[int] = None, m_dim: Optional[int] = None) -> State:
    v = _Parser(text, n_dim, m_dim, fields=False).parse()
    return v.get(None, State.zero())


def parse_vector_field(text: str, n_dim: Optional[int] = None, m_dim: Optional[int] = None) -> VectorField:
    """Parse ``(f) d(1) + (g) d(2)``; a bare 0 is the zero field."""
    p = _Parser(text, n_dim, m_dim, fields=True)
    v = p.parse()
    if v.get(None):
        raise ParseError("vector field has a term without d(i)", text, 0)
    try:
        return VectorField({i: s for i, s in v.items() if i is not None})
    except ValueError as exc:
        raise ParseError(str(exc), text, 0) from None


def parse(text: str, n_dim: Optional[int] = None, m_dim: Optional[int] = None):
    """State or VectorField, depending on whether d(i) occurs."""
    v = _Parser(text, n_dim, m_dim, fields=True).parse()
    if _has_field(v):
        return parse_vector_field(text, n_dim, m_dim)
    return v.get(None, State.zero())


# ---------------------------------------------------------------- connection files


def render_connection(c) -> str:
    lines = [f"N {c.n_dim}", f"M {c.m_dim}"]
    for i in range(1, c.m_dim + 1):
        lines.append(f"xi[{i}] = {c.component(i)}")
    return "\n".join(lines) + "\n"


_HEADER = re.compile(r"^(N|M)\s+(\d+)$")
_XI = re.compile(r"^xi\[(\d+)\]\s*=\s*(.*)$")


def parse_connection(text: str):
    """Read the connection file format written by :func:`render_connection`.

    Lines: ``N <int>``, ``M <int>``, then ``xi[i] = <vector field>`` for
    each i; blank lines and ``#`` comments are skipped.  Missing xi lines
    mean zero.
    """
    from .gaussmanin import Connection

    dims: dict = {}
    xi: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            if m.group(1) in dims:
                raise ParseError(f"line {lineno}: {m.group(1)} given twice")
            dims[m.group(1)] = int(m.group(2))
            continue
        m = _XI.match(line)
        if m:
            if "N" not in dims or "M" not in dims:
                raise ParseError(f"line {lineno}: N and M must precede xi lines")
            i = int(m.group(1))
            if not 1 <= i <= dims["M"]:
                raise ParseError(f"line {lineno}: xi index {i} out of range (M={dims['M']})")
            if i in xi:
                raise ParseError(f"line {lineno}: xi[{i}] given twice")
            try:
                xi[i] = parse_vector_field(m.group(2), dims["N"], dims["M"])
            except ParseError as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
            continue
        raise ParseError(f"line {lineno}: cannot read {raw.strip()!r}")
    if "N" not in dims or "M" not in dims:
        raise ParseError("connection file must declare N and M")
    return Connection(dims["N"], dims["M"], {i: v for i, v in xi.items() if v})


def roundtrip_ok(s: State) -> bool:
    return parse_state(render(s)) == s
