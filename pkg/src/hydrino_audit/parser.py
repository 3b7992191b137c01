"""Text expression language: parsing and printing.

Grammar (whitespace-insensitive, no implicit multiplication):

    expr    := term (("+"|"-") term)*
    term    := factor (("*"|"/") factor)*
    factor  := "-" factor | atom ("^" "(" rational ")" | "^" integer)?
    atom    := number | ident | call | "(" expr ")"
    call    := ("exp"|"sin"|"cos"|"log"|"Re") "(" expr ")"
             | "delta" "'"* "(" expr ")" | "delta" "^" "(" integer ")" "(" expr ")"
             | "Y" "(" integer "," integer ")"
    number  := integer ("/" positive-integer)?

The ``number`` rule is greedy: two integer tokens joined by "/" form one
rational literal, so ``2/4`` is the scalar 1/2 rather than a division node
(the canonical tree is the same either way).  Identifiers are letters,
digits and underscores not starting with a digit; the named-constant ids
(pi, i, alpha, a_H, hbar, m_e, c, e_charge, W_1) are reserved words.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .expr import (
    CONSTANT_IDS,
    Apply,
    Delta,
    Expr,
    FloatScalar,
    InvalidNodeError,
    NamedConstant,
    Power,
    Product,
    Rational,
    RealPart,
    SphHarmonic,
    Sum,
    Symbol,
    add,
    const,
    delta,
    mul,
    neg,
    pow_,
    rat,
    re_,
    sym,
    ylm,
)

_UNARY_FNS = ("exp", "sin", "cos", "log")
_CALL_NAMES = _UNARY_FNS + ("Re", "delta", "Y")


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start exceeds end")


class ParseError(Exception):
    """Carries the offending span and a list of expected-token descriptions."""

    def __init__(self, message: str, span: SourceSpan, expected: tuple[str, ...] = ()):
        super().__init__(f"{message} at offset {span.start}")
        self.message = message
        self.span = span
        self.expected = expected


@dataclass(frozen=True)
class _Token:
    kind: str      # INT, IDENT, OP, TICK, EOF
    text: str
    span: SourceSpan


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(_Token("INT", source[i:j], SourceSpan(i, j)))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("IDENT", source[i:j], SourceSpan(i, j)))
            i = j
            continue
        if ch == "*" and i + 1 < n and source[i + 1] == "*":
            # common slip: Python-style power operator
            raise ParseError("unknown operator '**' (use '^' for powers)",
                             SourceSpan(i, i + 2), ("'*'", "'^'"))
        if ch in "+-*/^(),":
            tokens.append(_Token("OP", ch, SourceSpan(i, i + 1)))
            i += 1
            continue
        if ch == "'":
            tokens.append(_Token("TICK", ch, SourceSpan(i, i + 1)))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", SourceSpan(i, i + 1))
    tokens.append(_Token("EOF", "", SourceSpan(n, n)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0
        self.depth = 0

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect_op(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind == "OP" and tok.text == text:
            return self.advance()
        raise ParseError(f"expected {text!r}", tok.span, (repr(text),))

    def fail(self, message: str, expected: tuple[str, ...] = ()):
        raise ParseError(message, self.peek().span, expected)

    # grammar rules -------------------------------------------------------

    MAX_DEPTH = 200

    def expression(self) -> Expr:
        self.depth += 1
        if self.depth > self.MAX_DEPTH:
            raise ParseError("expression nested too deeply", self.peek().span)
        try:
            terms = [self.term()]
            while self.peek().kind == "OP" and self.peek().text in "+-":
                op = self.advance().text
                t = self.term()
                terms.append(t if op == "+" else neg(t))
            return add(*terms)
        finally:
            self.depth -= 1

    def term(self) -> Expr:
        factors = [self.factor()]
        while self.peek().kind == "OP" and self.peek().text in "*/":
            op = self.advance()
            f = self.factor()
            factors.append(f if op.text == "*" else self._wrap(pow_, op, f, -1))
        return mul(*factors)

    def factor(self) -> Expr:
        self.depth += 1
        if self.depth > self.MAX_DEPTH:
            raise ParseError("expression nested too deeply", self.peek().span)
        try:
            tok = self.peek()
            if tok.kind == "OP" and tok.text == "-":
                self.advance()
                return neg(self.factor())
            e = self.atom()
            if self.peek().kind == "OP" and self.peek().text == "^":
                self.advance()
                e = self._wrap(pow_, self.peek().span, e, self.exponent())
            return e
        finally:
            self.depth -= 1

    def exponent(self) -> Fraction:
        if self.peek().kind == "OP" and self.peek().text == "(":
            self.advance()
            q = self.signed_rational()
            self.expect_op(")")
            return q
        return Fraction(self.signed_integer())

    def signed_integer(self) -> int:
        sign = 1
        if self.peek().kind == "OP" and self.peek().text == "-":
            self.advance()
            sign = -1
        tok = self.peek()
        if tok.kind != "INT":
            self.fail("expected an integer", ("integer",))
        self.advance()
        return sign * int(tok.text)

    def signed_rational(self) -> Fraction:
        p = self.signed_integer()
        if self.peek().kind == "OP" and self.peek().text == "/":
            self.advance()
            tok = self.peek()
            if tok.kind != "INT":
                self.fail("expected a positive integer denominator", ("positive integer",))
            self.advance()
            q = int(tok.text)
            if q == 0:
                raise ParseError("zero denominator", tok.span, ("positive integer",))
            return Fraction(p, q)
        return Fraction(p)

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            p = int(tok.text)
            # greedy rational literal: INT "/" INT is one number token pair
            if (self.peek().kind == "OP" and self.peek().text == "/"
                    and self.peek(1).kind == "INT"):
                self.advance()
                den_tok = self.advance()
                q = int(den_tok.text)
                if q == 0:
                    raise ParseError("zero denominator", den_tok.span, ("positive integer",))
                return rat(p, q)
            return rat(p)
        if tok.kind == "IDENT":
            return self.ident_or_call()
        if tok.kind == "OP" and tok.text == "(":
            self.advance()
            e = self.expression()
            self.expect_op(")")
            return e
        self.fail("expected a number, identifier, call or '('",
                  ("number", "identifier", "function call", "'('", "'-'"))

    def ident_or_call(self) -> Expr:
        tok = self.advance()
        name = tok.text
        nxt = self.peek()
        if name == "delta":
            return self.delta_call(tok)
        if name == "Y":
            return self.ylm_call(tok)
        if name in _UNARY_FNS or name == "Re":
            self.expect_op("(")
            arg = self.expression()
            self.expect_op(")")
            return re_(arg) if name == "Re" else Apply(name, arg)
        if nxt.kind == "OP" and nxt.text == "(":
            raise ParseError(
                f"unknown function {name!r}", tok.span,
                tuple(repr(f) for f in _CALL_NAMES))
        if name in CONSTANT_IDS:
            return const(name)
        return self._wrap(sym, tok.span, name)

    def delta_call(self, name_tok: _Token) -> Expr:
        order = 0
        while self.peek().kind == "TICK":
            self.advance()
            order += 1
        if order == 0 and self.peek().kind == "OP" and self.peek().text == "^":
            self.advance()
            self.expect_op("(")
            order = self.signed_integer()
            self.expect_op(")")
        self.expect_op("(")
        arg = self.expression()
        close = self.expect_op(")")
        span = SourceSpan(name_tok.span.start, close.span.end)
        return self._wrap(delta, span, arg, order)

    def ylm_call(self, name_tok: _Token) -> Expr:
        self.expect_op("(")
        l = self.signed_integer()
        self.expect_op(",")
        m = self.signed_integer()
        close = self.expect_op(")")
        span = SourceSpan(name_tok.span.start, close.span.end)
        return self._wrap(ylm, span, l, m)

    def _wrap(self, builder, span, *args):
        """Turn constructor rejections into positioned parse errors."""
        if isinstance(span, _Token):
            span = span.span
        try:
            return builder(*args)
        except InvalidNodeError as exc:
            raise ParseError(str(exc), span) from exc


def parse_expr(source: str) -> Expr:
    """Parse ``source`` into a canonical expression tree.

    Raises :class:`ParseError` (never anything else) on non-conforming input.
    """
    p = _Parser(source)
    e = p.expression()
    tok = p.peek()
    if tok.kind != "EOF":
        raise ParseError(f"unexpected trailing input {tok.text!r}", tok.span,
                         ("end of input", "operator"))
    return e


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def print_expr(e: Expr) -> str:
    """Render with minimal parenthesization; reparsing yields an equal tree.

    Expressions containing float scalars fall outside the text grammar (there
    is no float literal) and are rendered with ``repr`` for display only.
    """
    return _print(e)


def _print(e: Expr) -> str:
    if isinstance(e, Rational):
        # expression level: a leading minus parses as unary negation
        return _rational_str(e.value) if e.value >= 0 else f"-{_rational_str(-e.value)}"
    if isinstance(e, Sum):
        parts = [_print(e.terms[0])]
        for t in e.terms[1:]:
            negative, abs_t = _split_sign(t)
            # stripping a -1 coefficient can expose a bare nested sum
            body = f"({_print(abs_t)})" if isinstance(abs_t, Sum) else _print(abs_t)
            parts.append((" - " if negative else " + ") + body)
        return "".join(parts)
    if isinstance(e, Product) or (isinstance(e, Power) and e.exponent < 0):
        return _print_product(e)
    return _print_factor(e)


def _split_sign(t: Expr):
    if isinstance(t, Rational) and t.value < 0:
        return True, Rational(-t.value)
    if isinstance(t, Product):
        head = t.factors[0]
        if isinstance(head, Rational) and head.value < 0:
            return True, mul(Rational(-head.value), *t.factors[1:])
    return False, t


def _print_product(e: Expr) -> str:
    factors = e.factors if isinstance(e, Product) else (e,)
    coeff = Fraction(1)
    numer: list[Expr] = []
    denom: list[Expr] = []
    for f in factors:
        if isinstance(f, Rational):
            coeff *= f.value
        elif isinstance(f, Power) and f.exponent < 0:
            denom.append(pow_(f.base, -f.exponent))
        else:
            numer.append(f)
    sign = "-" if coeff < 0 else ""
    coeff = abs(coeff)
    parts = []
    if coeff != 1 or not numer:
        parts.append(_rational_str(coeff))
    parts.extend(_print_factor(f) for f in numer)
    out = sign + "*".join(parts)
    for d in denom:
        s = _print_factor(d)
        # a digit right after "/" would be lexed into a rational literal
        if s[0].isdigit():
            s = f"({s})"
        out += "/" + s
    return out


def _rational_str(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _print_factor(e: Expr) -> str:
    """Render at factor precedence: parenthesize sums, products and signs."""
    if isinstance(e, Rational):
        if e.value < 0:
            return f"({_rational_str(e.value)})"
        return _rational_str(e.value)
    if isinstance(e, FloatScalar):
        return repr(e.value)
    if isinstance(e, (NamedConstant, Symbol)):
        return e.name
    if isinstance(e, Apply):
        return f"{e.fn}({_print(e.arg)})"
    if isinstance(e, RealPart):
        return f"Re({_print(e.arg)})"
    if isinstance(e, Delta):
        if e.order <= 2:
            ticks = "'" * e.order
            return f"delta{ticks}({_print(e.arg)})"
        return f"delta^({e.order})({_print(e.arg)})"
    if isinstance(e, SphHarmonic):
        return f"Y({e.l},{e.m})"
    if isinstance(e, Power):
        if e.exponent < 0:
            return f"({_print_product(e)})"
        base = e.base
        base_str = _print_factor(base)
        if isinstance(base, (Sum, Product, Power)) or (
                isinstance(base, Rational) and
                (base.value < 0 or base.value.denominator != 1)):
            base_str = f"({_print(base)})"
        q = e.exponent
        if q.denominator == 1 and q > 0:
            return f"{base_str}^{q.numerator}"
        return f"{base_str}^({_rational_str(q)})"
    # Sum or Product in factor position
    return f"({_print(e)})"
