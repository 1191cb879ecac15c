"""Input DSL for vector fields: a bracketed triple of polynomial expressions
in x, y, z with Gaussian-rational coefficients.

Grammar (whitespace ignored; positions are 0-based character offsets):

    triple : '[' expr ',' expr ',' expr ']'
    expr   : term (('+' | '-') term)*
    term   : factor (('*' factor) | ('/' factor) | factor)*
    factor : ('-')* atom ('^' nat)?
    atom   : nat | 'i' | 'x' | 'y' | 'z' | '(' expr ')'

Division is restricted to nonzero constant divisors (rationals like 1/2 and
scalar units like (1+i)).  Parse-print-parse is idempotent for the canonical
graded-lex printer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .scalars import GaussianRational
from .series import MSeries, format_mseries
from .vfield import VectorField

_ATOM_VARS = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}


@dataclass
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(src: str):
    tokens = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            tokens.append(_Token("nat", src[i:j], i))
            i = j
            continue
        if ch in "xyzi":
            tokens.append(_Token("name", ch, i))
            i += 1
            continue
        if ch in "+-*/^(),[]":
            tokens.append(_Token(ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, trunc: int):
        self.tokens = _tokenize(src)
        self.k = 0
        self.trunc = trunc

    def peek(self) -> _Token:
        return self.tokens[self.k]

    def take(self, kind=None) -> _Token:
        tok = self.tokens[self.k]
        if kind is not None and tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end'!r}", tok.pos)
        self.k += 1
        return tok

    # expression grammar -----------------------------------------------------

    def parse_triple(self) -> VectorField:
        self.take("[")
        comps = [self.parse_expr()]
        for _ in range(2):
            self.take(",")
            comps.append(self.parse_expr())
        self.take("]")
        self.take("end")
        return VectorField(*comps)

    def parse_expr(self) -> MSeries:
        acc = self.parse_term()
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            rhs = self.parse_term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def parse_term(self) -> MSeries:
        acc = self.parse_factor()
        while True:
            tok = self.peek()
            if tok.kind == "*":
                self.take()
                acc = acc * self.parse_factor()
            elif tok.kind == "/":
                pos = self.take().pos
                rhs = self.parse_factor()
                c = rhs.constant_term()
                if rhs.max_degree() > 0 or not c:
                    raise ParseError("division only by nonzero constants", pos)
                acc = acc.scale(GaussianRational(1) / c)
            elif tok.kind in ("nat", "name", "("):
                # juxtaposition, e.g. "2y"
                acc = acc * self.parse_factor()
            else:
                return acc

    def parse_factor(self) -> MSeries:
        negate = False
        while self.peek().kind == "-":
            self.take()
            negate = not negate
        base = self.parse_atom()
        if self.peek().kind == "^":
            pos = self.take().pos
            tok = self.take("nat")
            exp = int(tok.text)
            if exp > 4096:
                raise ParseError("exponent too large", pos)
            if exp > self.trunc and base.valuation() >= 1:
                base = MSeries.zero(self.trunc)
            else:
                base = base.pow(exp)
        return -base if negate else base

    def parse_atom(self) -> MSeries:
        tok = self.peek()
        if tok.kind == "nat":
            self.take()
            return MSeries.constant(Fraction(int(tok.text)), self.trunc)
        if tok.kind == "name":
            self.take()
            if tok.text == "i":
                return MSeries.constant(GaussianRational(0, 1), self.trunc)
            return MSeries.variable(tok.text, self.trunc)
        if tok.kind == "(":
            self.take()
            inner = self.parse_expr()
            self.take(")")
            return inner
        raise ParseError(f"expected a value, found {tok.text or 'end'!r}", tok.pos)


def parse_field(src: str, trunc: int) -> VectorField:
    """Parse '[F, G, H]' into a vector field at the given truncation."""
    return _Parser(src, trunc).parse_triple()


def parse_series(src: str, trunc: int) -> MSeries:
    p = _Parser(src, trunc)
    out = p.parse_expr()
    p.take("end")
    return out


def format_field(field: VectorField) -> str:
    return "[" + ", ".join(format_mseries(c) for c in field.components) + "]"
