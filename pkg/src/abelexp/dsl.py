"""Text syntax for exponential polynomials.

Grammar (whitespace-insensitive)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' '-'? INT)?
    atom    := NUMBER | 'i' | 'zeta' '(' INT ')' | VAR | exp | '(' expr ')' | '[' expr (',' expr)* ']'
    exp     := 'exp' '[' values? ';' values? ']'
    VAR     := 'x' INT             (free coordinate, 1-based)

Division and negative powers are only allowed for constant scalars.
``format_expopoly`` prints the canonical text that parses back to the same
value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import Cyclotomic, format_cyclotomic, root_of_unity
from .errors import AbelexpError, ParseError, PreconditionError, StructuralError, UnsupportedEmbeddingError
from .expopoly import Exponential, ExpoPoly, VectorPolynomial
from .groups import GroupSpec

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()\[\],;]))"
)


@dataclass
class Token:
    kind: str  # num, name, op, end
    text: str
    pos: int


def _tokenize(text: str) -> list[Token]:
    tokens, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise _error(text, pos, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), start))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _error(text: str, pos: int, message: str) -> ParseError:
    line, col = _line_col(text, pos)
    return ParseError(message, line, col)


class _Parser:
    def __init__(self, text: str, group: GroupSpec, order: int):
        self.text = text
        self.group = group
        self.order = order
        self.tokens = _tokenize(text)
        self.i = 0

    # -- helpers ----------------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not (self.tok.kind == "op" and self.tok.text == text):
            found = self.tok.text or "end of input"
            raise self.err(f"expected {text!r}, found {found!r}")
        return self.advance()

    def err(self, message: str, pos: int | None = None) -> ParseError:
        return _error(self.text, self.tok.pos if pos is None else pos, message)

    def const(self, value) -> ExpoPoly:
        return ExpoPoly.constant(self.group, (Cyclotomic.coerce(value, self.order),), self.order)

    def as_scalar_constant(self, f: ExpoPoly, pos: int) -> Cyclotomic:
        if f.vector_dim != 1:
            raise self.err("expected a scalar, found a vector", pos)
        if f.is_zero():
            return Cyclotomic.zero(self.order)
        if len(f.terms) != 1 or not f.terms[0][0].is_trivial() or f.terms[0][1].degree != 0:
            raise self.err("expected a constant scalar", pos)
        return f.terms[0][1].terms[(0,) * self.group.free_rank][0]

    # -- grammar ----------------------------------------------------------------

    def parse(self) -> ExpoPoly:
        f = self.expr()
        if self.tok.kind != "end":
            raise self.err(f"unexpected {self.tok.text!r}")
        return f

    def combine(self, a: ExpoPoly, b: ExpoPoly, pos: int, sign: int) -> ExpoPoly:
        if a.vector_dim != b.vector_dim:
            raise self.err(f"cannot add values of dimension {a.vector_dim} and {b.vector_dim}", pos)
        return a + b if sign > 0 else a - b

    def expr(self) -> ExpoPoly:
        f = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            pos = self.tok.pos
            sign = 1 if self.advance().text == "+" else -1
            f = self.combine(f, self.term(), pos, sign)
        return f

    def term(self) -> ExpoPoly:
        f = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            pos = self.tok.pos
            op = self.advance().text
            rhs_pos = self.tok.pos
            g = self.unary()
            if op == "*":
                if f.vector_dim > 1 and g.vector_dim > 1:
                    raise self.err("cannot multiply two vectors", pos)
                f = f * g
            else:
                c = self.as_scalar_constant(g, rhs_pos)
                if c.is_zero():
                    raise self.err("division by zero", rhs_pos)
                f = f.scale(c.inverse())
        return f

    def unary(self) -> ExpoPoly:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> ExpoPoly:
        base_pos = self.tok.pos
        f = self.atom()
        if not self.accept("^"):
            return f
        neg = self.accept("-")
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            raise self.err("exponent must be an integer")
        self.advance()
        k = int(t.text)
        if neg:
            c = self.as_scalar_constant(f, base_pos)
            if c.is_zero():
                raise self.err("negative power of zero", base_pos)
            return self.const(c ** (-k))
        if f.vector_dim > 1 and k > 1:
            raise self.err("cannot raise a vector to a power", base_pos)
        result = self.const(1) if f.vector_dim == 1 else f
        if f.vector_dim == 1:
            for _ in range(k):
                result = result * f
        return result

    def atom(self) -> ExpoPoly:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return self.const(Fraction(t.text))
        if t.kind == "name":
            return self.name_atom()
        if self.accept("("):
            f = self.expr()
            self.expect(")")
            return f
        if self.accept("["):
            comps = [self.expr()]
            while self.accept(","):
                comps.append(self.expr())
            self.expect("]")
            for c in comps:
                if c.vector_dim != 1:
                    raise self.err("vector entries must be scalars", t.pos)
            return ExpoPoly.stack(comps) if len(comps) > 1 else comps[0]
        found = t.text or "end of input"
        raise self.err(f"unexpected {found!r}")

    def name_atom(self) -> ExpoPoly:
        t = self.advance()
        name = t.text
        if name == "i":
            return self.const(root_of_unity(4, 1, self.order))
        if name == "zeta":
            self.expect("(")
            nt = self.tok
            if nt.kind != "num" or not nt.text.isdigit() or int(nt.text) < 1:
                raise self.err("zeta(n) needs a positive integer n")
            self.advance()
            self.expect(")")
            n = int(nt.text)
            try:
                return self.const(root_of_unity(n, 1, self.order))
            except UnsupportedEmbeddingError:
                raise self.err(f"zeta({n}) needs the cyclotomic order to be a multiple of {n} (current {self.order})", nt.pos)
        if name == "exp":
            return self.exp_atom(t.pos)
        m = re.fullmatch(r"x(\d+)", name)
        if m:
            idx = int(m.group(1))
            if not 1 <= idx <= self.group.free_rank:
                raise self.err(f"variable {name} out of range: group {self.group} has {self.group.free_rank} free coordinates", t.pos)
            exp = tuple(int(j == idx - 1) for j in range(self.group.free_rank))
            poly = VectorPolynomial(self.group.free_rank, 1, self.order, {exp: (1,)})
            return ExpoPoly.polynomial(self.group, poly)
        if re.fullmatch(r"[yt]\d+", name):
            raise self.err(
                f"{name}: torsion coordinates cannot appear in polynomials "
                "(additive maps into C vanish on elements of finite order); use exp[...; w] instead",
                t.pos,
            )
        raise self.err(f"unknown name {name!r}", t.pos)

    def exp_atom(self, pos: int) -> ExpoPoly:
        self.expect("[")

        def values(stop: str):
            out = []
            if self.tok.kind == "op" and self.tok.text == stop:
                return out
            while True:
                vpos = self.tok.pos
                out.append((self.as_scalar_constant(self.expr(), vpos), vpos))
                if not self.accept(","):
                    return out
        free = values(";")
        self.expect(";")
        tors = values("]")
        self.expect("]")
        g = self.group
        if len(free) != g.free_rank:
            raise self.err(f"exp needs {g.free_rank} free values, got {len(free)}", pos)
        if len(tors) != len(g.torsion_orders):
            raise self.err(f"exp needs {len(g.torsion_orders)} torsion values, got {len(tors)}", pos)
        for v, vpos in free:
            if v.is_zero():
                raise self.err("exponential value on a free generator must be nonzero", vpos)
        for (v, vpos), n in zip(tors, g.torsion_orders):
            if not (v ** n).is_one():
                raise self.err(f"torsion value w must satisfy w^{n} = 1", vpos)
        m = Exponential(g, [v for v, _ in free], [v for v, _ in tors], self.order)
        return ExpoPoly.exponential(m)


def parse(text: str, group: GroupSpec, order: int) -> ExpoPoly:
    """Parse ``text`` into a canonical ExpoPoly over Q(zeta_order)."""
    return _Parser(text, group, order).parse()


def required_root_orders(text: str) -> list[int]:
    """Orders n of every ``zeta(n)`` literal in the text."""
    return [int(n) for n in re.findall(r"zeta\s*\(\s*(\d+)\s*\)", text)]


def _format_coeff_times(c: Cyclotomic, body: str) -> tuple[str, str]:
    """Split a coefficient into (sign, text) for a product with ``body``."""
    if c.is_rational():
        q = c.coeffs[0]
        sign = "-" if q < 0 else "+"
        q = abs(q)
        if not body:
            return sign, format_cyclotomic(Cyclotomic.rational(q, c.order))
        if q == 1:
            return sign, body
        return sign, f"{format_cyclotomic(Cyclotomic.rational(q, c.order))}*{body}"
    text = format_cyclotomic(c)
    return "+", f"{text}*{body}" if body else text


def _format_scalar(f: ExpoPoly) -> str:
    parts = []
    r = f.group.free_rank
    for m, p in f.terms:
        exp_txt = ""
        if not m.is_trivial():
            fv = ", ".join(format_cyclotomic(v) for v in m.free_values)
            tv = ", ".join(format_cyclotomic(v) for v in m.torsion_values)
            exp_txt = f"exp[{fv}; {tv}]" if tv else f"exp[{fv};]"
        for e, (c,) in p.sorted_terms():
            factors = []
            for j in range(r):
                if e[j] == 1:
                    factors.append(f"x{j + 1}")
                elif e[j] > 1:
                    factors.append(f"x{j + 1}^{e[j]}")
            if exp_txt:
                factors.append(exp_txt)
            parts.append(_format_coeff_times(c, "*".join(factors)))
    if not parts:
        return "0"
    sign, body = parts[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def format_expopoly(f: ExpoPoly) -> str:
    """Deterministic canonical text; ``parse(format_expopoly(f)) == f``."""
    if f.vector_dim == 1:
        return _format_scalar(f)
    return "[" + ", ".join(_format_scalar(f.component(j)) for j in range(f.vector_dim)) + "]"


__all__ = ["parse", "format_expopoly", "required_root_orders", "ParseError", "AbelexpError", "PreconditionError", "StructuralError"]
