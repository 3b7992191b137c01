"""Immutable algebraic expression trees with exact rational scalars.

Every node is a frozen dataclass and the builder functions canonicalize on
construction: nested sums/products are flattened, rational scalars are folded
(exactly, via ``fractions.Fraction``), identity elements are dropped and
children are sorted into a fixed total order.  Structural equality of two
canonical trees is therefore the module's notion of expression equality; no
semantic equivalence (``sin(x)`` vs ``cos(x - pi/2)``) is attempted.

Floats are quarantined: a ``FloatScalar`` node is never combined with rational
scalars by the builders, so symbolic results stay exact and floats only matter
once an expression is evaluated numerically.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

#: Closed set of named-constant identifiers.
CONSTANT_IDS = ("pi", "i", "alpha", "a_H", "hbar", "m_e", "c", "e_charge", "W_1")

#: Closed set of function names usable in Apply nodes.
FUNCTION_NAMES = ("exp", "sin", "cos", "log")


class InvalidNodeError(ValueError):
    """A construction request violated a node invariant."""


@dataclass(frozen=True)
class Expr:
    """Base class for all expression nodes."""

    def sort_key(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Rational(Expr):
    value: Fraction

    def sort_key(self):
        return (0, self.value.numerator, self.value.denominator)


@dataclass(frozen=True)
class FloatScalar(Expr):
    value: float

    def sort_key(self):
        return (1, self.value)


@dataclass(frozen=True)
class NamedConstant(Expr):
    name: str

    def sort_key(self):
        return (2, self.name)


@dataclass(frozen=True)
class Symbol(Expr):
    name: str

    def sort_key(self):
        return (3, self.name)


@dataclass(frozen=True)
class Power(Expr):
    base: Expr
    exponent: Fraction

    def sort_key(self):
        return (4, self.base.sort_key(), self.exponent.numerator, self.exponent.denominator)


@dataclass(frozen=True)
class Apply(Expr):
    fn: str
    arg: Expr

    def sort_key(self):
        return (5, self.fn, self.arg.sort_key())


@dataclass(frozen=True)
class RealPart(Expr):
    arg: Expr

    def sort_key(self):
        return (6, self.arg.sort_key())


@dataclass(frozen=True)
class Delta(Expr):
    """Dirac delta (or its ``order``-th derivative) of an affine argument."""

    arg: Expr
    order: int

    def sort_key(self):
        return (7, self.order, self.arg.sort_key())


@dataclass(frozen=True)
class SphHarmonic(Expr):
    """Spherical-harmonic atom Y(l, m) in the angle symbols ``theta``/``phi``."""

    l: int
    m: int
    theta: str = "theta"
    phi: str = "phi"

    def sort_key(self):
        return (8, self.l, self.m, self.theta, self.phi)


@dataclass(frozen=True)
class Product(Expr):
    factors: tuple[Expr, ...]

    def sort_key(self):
        return (9, tuple(f.sort_key() for f in self.factors))


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple[Expr, ...]

    def sort_key(self):
        return (10, tuple(t.sort_key() for t in self.terms))


# ---------------------------------------------------------------------------
# canonicalizing builders
# ---------------------------------------------------------------------------

def rat(p, q=1) -> Rational:
    """Exact rational scalar; reduced with a positive denominator."""
    try:
        return Rational(Fraction(p, q))
    except ZeroDivisionError:
        raise InvalidNodeError("rational scalar with zero denominator") from None


def flt(value: float) -> FloatScalar:
    return FloatScalar(float(value))


def sym(name: str) -> Symbol:
    if not name or name in CONSTANT_IDS:
        raise InvalidNodeError(f"invalid symbol name {name!r}")
    return Symbol(name)


def const(name: str) -> NamedConstant:
    if name not in CONSTANT_IDS:
        raise InvalidNodeError(f"unknown named constant {name!r}")
    return NamedConstant(name)


def add(*terms: Expr) -> Expr:
    flat: list[Expr] = []
    for t in terms:
        if isinstance(t, Sum):
            flat.extend(t.terms)
        else:
            flat.append(t)
    acc = Fraction(0)
    rest = []
    for t in flat:
        if isinstance(t, Rational):
            acc += t.value
        else:
            rest.append(t)
    if acc != 0 or not rest:
        rest.append(Rational(acc))
    rest.sort(key=lambda e: e.sort_key())
    if len(rest) == 1:
        return rest[0]
    return Sum(tuple(rest))


def mul(*factors: Expr) -> Expr:
    flat: list[Expr] = []
    for f in factors:
        if isinstance(f, Product):
            flat.extend(f.factors)
        else:
            flat.append(f)
    coeff = Fraction(1)
    rest = []
    for f in flat:
        if isinstance(f, Rational):
            coeff *= f.value
        else:
            rest.append(f)
    if coeff == 0:
        return Rational(Fraction(0))
    if coeff != 1 or not rest:
        rest.append(Rational(coeff))
    rest.sort(key=lambda e: e.sort_key())
    if len(rest) == 1:
        return rest[0]
    return Product(tuple(rest))


def neg(e: Expr) -> Expr:
    return mul(rat(-1), e)


def sub(a: Expr, b: Expr) -> Expr:
    return add(a, neg(b))


def div(a: Expr, b: Expr) -> Expr:
    return mul(a, pow_(b, -1))


def pow_(base: Expr, exponent) -> Expr:
    """Power with an exact rational exponent (the only exponent kind)."""
    q = exponent if isinstance(exponent, Fraction) else Fraction(exponent)
    if q == 0:
        return rat(1)
    if q == 1:
        return base
    if isinstance(base, Rational) and base.value == 0:
        if q < 0:
            raise InvalidNodeError("zero raised to a negative power")
        return rat(0)
    if isinstance(base, Rational) and q.denominator == 1:
        return Rational(base.value ** q.numerator)
    if isinstance(base, NamedConstant) and base.name == "i" and q.denominator == 1:
        return _I_CYCLE[q.numerator % 4]
    if isinstance(base, Power) and q.denominator == 1:
        # (b^p)^n = b^(p n) identically for integer n (plain multiplication,
        # no branch issues); non-integer outer exponents stay nested
        return pow_(base.base, base.exponent * q)
    return Power(base, q)


def apply_fn(fn: str, arg: Expr) -> Apply:
    if fn not in FUNCTION_NAMES:
        raise InvalidNodeError(f"unknown function {fn!r}")
    return Apply(fn, arg)


def exp(arg: Expr) -> Apply:
    return Apply("exp", arg)


def sin(arg: Expr) -> Apply:
    return Apply("sin", arg)


def cos(arg: Expr) -> Apply:
    return Apply("cos", arg)


def log(arg: Expr) -> Apply:
    return Apply("log", arg)


def re_(arg: Expr) -> RealPart:
    return RealPart(arg)


def delta(arg: Expr, order: int = 0) -> Delta:
    if order < 0:
        raise InvalidNodeError("delta derivative order must be >= 0")
    _validate_affine(arg)
    return Delta(arg, order)


def ylm(l: int, m: int, theta: str = "theta", phi: str = "phi") -> SphHarmonic:
    if l < 0:
        raise InvalidNodeError(f"spherical harmonic degree l={l} must be >= 0")
    if abs(m) > l:
        raise InvalidNodeError(f"spherical harmonic order |m|={abs(m)} exceeds l={l}")
    return SphHarmonic(l, m, theta, phi)


# i^n cycle used by pow_; index is n mod 4.
_I_CYCLE: tuple[Expr, ...] = ()


def _init_i_cycle():
    global _I_CYCLE
    i = NamedConstant("i")
    _I_CYCLE = (rat(1), i, rat(-1), Product((rat(-1), i)))


_init_i_cycle()


def _validate_affine(arg: Expr) -> None:
    """Delta arguments must be affine with at least one symbol."""
    if not free_symbols(arg):
        raise InvalidNodeError("delta argument must contain a symbol")
    terms = arg.terms if isinstance(arg, Sum) else (arg,)
    for t in terms:
        if not free_symbols(t):
            continue
        if isinstance(t, Symbol):
            continue
        if isinstance(t, Product):
            symbolic = [f for f in t.factors if free_symbols(f)]
            if len(symbolic) == 1 and isinstance(symbolic[0], Symbol):
                continue
        raise InvalidNodeError(f"delta argument must be affine in its symbols: {t!r}")


# ---------------------------------------------------------------------------
# structural queries
# ---------------------------------------------------------------------------

def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, Sum):
        return e.terms
    if isinstance(e, Product):
        return e.factors
    if isinstance(e, Power):
        return (e.base,)
    if isinstance(e, (Apply, RealPart)):
        return (e.arg,)
    if isinstance(e, Delta):
        return (e.arg,)
    return ()


def walk(e: Expr) -> Iterator[Expr]:
    """Pre-order traversal over all subexpressions."""
    yield e
    for c in children(e):
        yield from walk(c)


def free_symbols(e: Expr) -> frozenset[str]:
    return frozenset(n.name for n in walk(e) if isinstance(n, Symbol))


def contains_delta(e: Expr) -> bool:
    return any(isinstance(n, Delta) for n in walk(e))


def contains_i(e: Expr) -> bool:
    return any(isinstance(n, NamedConstant) and n.name == "i" for n in walk(e))


def expr_equal(a: Expr, b: Expr) -> bool:
    """Structural equality of canonical trees (no semantic equivalence)."""
    return a == b


def substitute(e: Expr, target: Expr, replacement: Expr) -> Expr:
    """Replace every occurrence of the exact subtree ``target``; the result is
    rebuilt through the canonicalizing constructors."""
    if e == target:
        return replacement
    if isinstance(e, Sum):
        return add(*(substitute(t, target, replacement) for t in e.terms))
    if isinstance(e, Product):
        return mul(*(substitute(f, target, replacement) for f in e.factors))
    if isinstance(e, Power):
        return pow_(substitute(e.base, target, replacement), e.exponent)
    if isinstance(e, Apply):
        return Apply(e.fn, substitute(e.arg, target, replacement))
    if isinstance(e, RealPart):
        return RealPart(substitute(e.arg, target, replacement))
    if isinstance(e, Delta):
        return delta(substitute(e.arg, target, replacement), e.order)
    return e


ScalarNode = Union[Rational, FloatScalar, NamedConstant]
