"""Operator expression parser and canonical printers.

Grammar (juxtaposition is not multiplication; '*' is mandatory):

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := 'x' | 'D' | rational | '(' expr ')'

Rational literals are ``p`` or ``p/q``; '^' takes nonnegative integer
exponents only.  ``parse_operator(format_operator(phi)) == phi``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import OperatorSyntaxError
from .exact import Poly, Q
from .weyl import D, DiffOp, x_op

_ATOMS = set("xD+-*^()")


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in _ATOMS:
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            start = i
            startcol = col
            while i < len(text) and text[i].isdigit():
                i += 1
                col += 1
            num = int(text[start:i])
            den = None
            if i < len(text) and text[i] == "/" and i + 1 < len(text) and text[i + 1].isdigit():
                i += 1
                col += 1
                dstart = i
                while i < len(text) and text[i].isdigit():
                    i += 1
                    col += 1
                den = int(text[dstart:i])
                if den == 0:
                    raise OperatorSyntaxError("zero denominator in rational literal", line, startcol)
            tokens.append(_Token("num", Q(num, den or 1), line, startcol))
            continue
        raise OperatorSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("end", None, line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.peek()
        if tok.kind != kind:
            raise OperatorSyntaxError(
                f"expected {kind!r}, found {tok.value!r}" if tok.value else f"expected {kind!r}",
                tok.line,
                tok.col,
            )
        return self.advance()

    def parse(self) -> DiffOp:
        op = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise OperatorSyntaxError(f"trailing input {tok.value!r}", tok.line, tok.col)
        return op

    def expr(self) -> DiffOp:
        negate = False
        if self.peek().kind == "-":
            self.advance()
            negate = True
        acc = self.term()
        if negate:
            acc = -acc
        while self.peek().kind in ("+", "-"):
            opk = self.advance().kind
            rhs = self.term()
            acc = acc + rhs if opk == "+" else acc - rhs
        return acc

    def term(self) -> DiffOp:
        acc = self.factor()
        while self.peek().kind == "*":
            self.advance()
            acc = acc * self.factor()
        return acc

    def factor(self) -> DiffOp:
        base = self.base()
        if self.peek().kind == "^":
            caret = self.advance()
            tok = self.peek()
            if tok.kind == "-":
                raise OperatorSyntaxError("negative exponent", tok.line, tok.col)
            if tok.kind != "num" or tok.value.denominator != 1:
                raise OperatorSyntaxError(
                    "exponent must be a nonnegative integer", caret.line, caret.col
                )
            self.advance()
            return base ** int(tok.value)
        return base

    def base(self) -> DiffOp:
        tok = self.peek()
        if tok.kind == "x":
            self.advance()
            return x_op
        if tok.kind == "D":
            self.advance()
            return D
        if tok.kind == "num":
            self.advance()
            return DiffOp((Poly.const(tok.value),))
        if tok.kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        raise OperatorSyntaxError(
            f"unexpected token {tok.value!r}" if tok.value else "unexpected end of input",
            tok.line,
            tok.col,
        )


def parse_operator(text: str) -> DiffOp:
    """Parse an operator expression into canonical form."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printers


def _monomial_str(c: Fraction, j: int, i: int) -> str:
    parts = []
    if abs(c) != 1 or (j == 0 and i == 0):
        parts.append(str(abs(c)))
    if j:
        parts.append("x" if j == 1 else f"x^{j}")
    if i:
        parts.append("D" if i == 1 else f"D^{i}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    out = ""
    for j, c in reversed(p.terms()):
        body = _monomial_str(c, j, 0)
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out


def format_ratfun(f) -> str:
    from .exact import ONE_POLY

    if f.den == ONE_POLY:
        return format_poly(f.num)
    num = format_poly(f.num)
    den = format_poly(f.den)
    if f.num.terms() and len(f.num.terms()) > 1:
        num = f"({num})"
    if len(f.den.terms()) > 1:
        den = f"({den})"
    return f"{num}/{den}"


def format_operator(phi: DiffOp) -> str:
    """Canonical text form; parses back to the same operator."""
    if phi.is_zero():
        return "0"
    pieces = []  # (negative, body)
    for i in range(phi.order, -1, -1):
        p = phi.coefficient(i)
        if p.is_zero():
            continue
        terms = p.terms()
        if len(terms) == 1:
            j, c = terms[0]
            pieces.append((c < 0, _monomial_str(c, j, i)))
        else:
            body = f"({format_poly(p)})"
            if i:
                body += "*D" if i == 1 else f"*D^{i}"
            pieces.append((False, body))
    out = ""
    for neg, body in pieces:
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out
